#include "sumlevel/checkpoint.hpp"

#include "sumlevel/errors.hpp"
#include "sumlevel/transfer_operator.hpp"

#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <span>
#include <vector>

namespace sumlevel {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

class Fnv1a {
public:
    void update(const void* data, std::size_t size) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            hash_ ^= p[i];
            hash_ *= 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

class Writer {
public:
    explicit Writer(std::ofstream& out) : out_(out) {}

    void bytes(const void* data, std::size_t size) {
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        hash_.update(data, size);
    }
    template <class T>
    void scalar(T v) {
        bytes(&v, sizeof v);
    }
    void doubles(std::span<const double> v) { bytes(v.data(), v.size_bytes()); }
    std::uint64_t checksum() const { return hash_.value(); }

private:
    std::ofstream& out_;
    Fnv1a hash_;
};

class Reader {
public:
    Reader(std::ifstream& in, const std::filesystem::path& path) : in_(in), path_(path) {}

    void bytes(void* data, std::size_t size) {
        in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
        if (!in_) {
            throw CheckpointError("checkpoint " + path_.string() + " is truncated");
        }
        hash_.update(data, size);
    }
    template <class T>
    T scalar() {
        T v{};
        bytes(&v, sizeof v);
        return v;
    }
    std::vector<double> doubles(std::size_t count) {
        std::vector<double> v(count);
        bytes(v.data(), count * sizeof(double));
        return v;
    }
    std::uint64_t checksum() const { return hash_.value(); }

private:
    std::ifstream& in_;
    const std::filesystem::path& path_;
    Fnv1a hash_;
};

void expect(bool ok, const std::filesystem::path& path, const std::string& what) {
    if (!ok) {
        throw CheckpointError("checkpoint " + path.string() + ": " + what);
    }
}

} // namespace

std::optional<std::filesystem::path> checkpoint_dir_from_env() {
    const char* dir = std::getenv(kCheckpointDirEnv);
    if (dir == nullptr || *dir == '\0') {
        return std::nullopt;
    }
    return std::filesystem::path(dir);
}

std::string checkpoint_file_name(const std::string& mesh_kind, std::uint64_t intervals, int octaves) {
    return "lambda-" + mesh_kind + "-" + std::to_string(intervals) + "-" + std::to_string(octaves) + ".slck";
}

void LambdaIterator::save(const std::filesystem::path& path) const {
    const Mesh& mesh = *density_.mesh;
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        Writer w(out);
        w.bytes(kCheckpointMagic, sizeof kCheckpointMagic);
        w.scalar<std::uint32_t>(kCheckpointVersion);
        w.scalar<std::uint32_t>(density_.basis == Basis::Lebesgue ? 0 : 1);
        w.scalar<std::uint32_t>(mesh.kind() == MeshKind::Uniform ? 0 : 1);
        w.scalar<std::uint32_t>(static_cast<std::uint32_t>(mesh.octaves()));
        w.scalar<std::uint64_t>(mesh.intervals());
        w.scalar<std::uint64_t>(history_.size());
        w.doubles(density_.values);
        w.doubles(history_);
        const std::uint64_t sum = w.checksum();
        out.write(reinterpret_cast<const char*>(&sum), sizeof sum);
        if (!out) {
            throw IoError("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

LambdaIterator LambdaIterator::resume(const std::filesystem::path& path, std::shared_ptr<const Mesh> mesh,
                                      unsigned threads) {
    std::ifstream in(path, std::ios::binary);
    expect(static_cast<bool>(in), path, "cannot be opened");
    Reader r(in, path);
    char magic[4];
    r.bytes(magic, sizeof magic);
    expect(std::memcmp(magic, kCheckpointMagic, sizeof magic) == 0, path, "bad magic");
    expect(r.scalar<std::uint32_t>() == kCheckpointVersion, path, "unsupported version");
    expect(r.scalar<std::uint32_t>() == 1, path, "density basis is not h");
    const auto kind = r.scalar<std::uint32_t>();
    const auto octaves = r.scalar<std::uint32_t>();
    const auto intervals = r.scalar<std::uint64_t>();
    expect(kind == (mesh->kind() == MeshKind::Uniform ? 0U : 1U), path, "mesh kind differs from this run");
    expect(intervals == mesh->intervals(), path, "grid size differs from this run");
    expect(octaves == static_cast<std::uint32_t>(mesh->octaves()), path, "octave count differs from this run");
    const auto level = r.scalar<std::uint64_t>();
    expect(level >= 1 && level < (std::uint64_t{1} << 40), path, "implausible level");
    auto values = r.doubles(mesh->nodes().size());
    auto history = r.doubles(level);
    const std::uint64_t expected = r.checksum();
    std::uint64_t stored = 0;
    in.read(reinterpret_cast<char*>(&stored), sizeof stored);
    expect(static_cast<bool>(in) && stored == expected, path, "checksum mismatch");
    return LambdaIterator(DensityGrid{std::move(mesh), std::move(values), Basis::Invariant}, std::move(history), threads);
}

} // namespace sumlevel
