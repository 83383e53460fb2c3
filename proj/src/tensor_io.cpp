#include "pcv/tensor_io.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>

namespace pcv {

namespace {

constexpr char kMagic[4] = {'P', 'C', 'V', 'T'};

template <class T>
T to_little(T v) noexcept
{
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
            std::swap(b[i], b[sizeof(T) - 1 - i]);
        }
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <class T>
void put(std::ostream& out, T v)
{
    v = to_little(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path)
{
    T v;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
        throw IoError(IoError::Kind::MalformedTensor, path.string() + ": truncated tensor data");
    }
    return to_little(v);
}

const char* dtype_name(TensorDtype d)
{
    switch (d) {
    case TensorDtype::Float32: return "float32";
    case TensorDtype::Float64: return "float64";
    case TensorDtype::Int32: return "int32";
    }
    return "float32";
}

struct Header {
    int channels = 0, height = 0, width = 0;
    TensorDtype dtype = TensorDtype::Float32;
    bool ignore_mask = false;
};

void write_header(std::ostream& out, const Header& h, const std::string& legend)
{
    const nlohmann::ordered_json j = {{"shape", {h.channels, h.height, h.width}},
                                      {"dtype", dtype_name(h.dtype)},
                                      {"layout", "CHW"},
                                      {"ignore_mask", h.ignore_mask},
                                      {"legend", legend}};
    const std::string text = j.dump();
    out.write(kMagic, 4);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

Header read_header(std::istream& in, const std::filesystem::path& path)
{
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError(IoError::Kind::MalformedTensor, path.string() + ": missing PCVT magic");
    }
    const auto n = get<std::uint32_t>(in, path);
    std::string text(n, '\0');
    if (!in.read(text.data(), n)) {
        throw IoError(IoError::Kind::MalformedTensor, path.string() + ": truncated header");
    }
    Header h;
    try {
        const auto j = nlohmann::json::parse(text);
        const auto shape = j.at("shape").get<std::vector<int>>();
        if (shape.size() != 3 || shape[0] < 1 || shape[1] < 0 || shape[2] < 0) {
            throw IoError(IoError::Kind::MalformedTensor, path.string() + ": shape must be [C, H, W]");
        }
        h.channels = shape[0];
        h.height = shape[1];
        h.width = shape[2];
        const auto dtype = j.at("dtype").get<std::string>();
        if (dtype == "float32") h.dtype = TensorDtype::Float32;
        else if (dtype == "float64") h.dtype = TensorDtype::Float64;
        else if (dtype == "int32") h.dtype = TensorDtype::Int32;
        else throw IoError(IoError::Kind::MalformedTensor, path.string() + ": unknown dtype " + dtype);
        if (j.value("layout", std::string("CHW")) != "CHW") {
            throw IoError(IoError::Kind::MalformedTensor, path.string() + ": only CHW layout is supported");
        }
        h.ignore_mask = j.value("ignore_mask", false);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(IoError::Kind::MalformedTensor, path.string() + ": bad header: " + e.what());
    }
    return h;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(IoError::Kind::Unwritable, "cannot write " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(IoError::Kind::MissingFile, "cannot open " + path.string());
    }
    return in;
}

} // namespace

void write_vote_tensor(const std::filesystem::path& path, const VoteTensor& votes, TensorDtype dtype)
{
    if (dtype == TensorDtype::Int32) {
        throw IoError(IoError::Kind::MalformedTensor, "vote tensors are floating point");
    }
    const auto flags = votes.ignored().values();
    const bool mask = std::any_of(flags.begin(), flags.end(), [](std::uint8_t f) { return f != 0; });
    auto out = open_out(path);
    write_header(out, {votes.channels(), votes.height(), votes.width(), dtype, mask},
                 "channels 0..K-1 are voting cells, channel K is abstention");
    for (int c = 0; c < votes.channels(); ++c) {
        for (double v : votes.channel(c)) {
            if (dtype == TensorDtype::Float32) {
                put(out, static_cast<float>(v));
            } else {
                put(out, v);
            }
        }
    }
    if (mask) {
        out.write(reinterpret_cast<const char*>(flags.data()), static_cast<std::streamsize>(flags.size()));
    }
    if (!out) {
        throw IoError(IoError::Kind::Unwritable, "failed writing " + path.string());
    }
}

VoteTensor read_vote_tensor(const std::filesystem::path& path)
{
    auto in = open_in(path);
    const Header h = read_header(in, path);
    if (h.dtype == TensorDtype::Int32) {
        throw IoError(IoError::Kind::MalformedTensor, path.string() + ": vote tensor must be float32 or float64");
    }
    VoteTensor votes(h.height, h.width, h.channels);
    for (int c = 0; c < h.channels; ++c) {
        for (double& v : votes.channel(c)) {
            v = h.dtype == TensorDtype::Float32 ? static_cast<double>(get<float>(in, path)) : get<double>(in, path);
        }
    }
    if (h.ignore_mask) {
        auto flags = votes.ignored().values();
        if (!in.read(reinterpret_cast<char*>(flags.data()), static_cast<std::streamsize>(flags.size()))) {
            throw IoError(IoError::Kind::MalformedTensor, path.string() + ": truncated ignore mask");
        }
    }
    return votes;
}

void write_label_map(const std::filesystem::path& path, const Plane<CategoryId>& labels)
{
    auto out = open_out(path);
    write_header(out, {1, labels.height(), labels.width(), TensorDtype::Int32, false}, "category id, -1 is void");
    for (CategoryId v : labels.values()) {
        put<std::int32_t>(out, v);
    }
    if (!out) {
        throw IoError(IoError::Kind::Unwritable, "failed writing " + path.string());
    }
}

Plane<CategoryId> read_label_map(const std::filesystem::path& path)
{
    auto in = open_in(path);
    const Header h = read_header(in, path);
    if (h.dtype != TensorDtype::Int32 || h.channels != 1) {
        throw IoError(IoError::Kind::MalformedTensor, path.string() + ": label map must be int32 with one channel");
    }
    Plane<CategoryId> labels(h.height, h.width);
    for (CategoryId& v : labels.values()) {
        v = get<std::int32_t>(in, path);
    }
    return labels;
}

} // namespace pcv
