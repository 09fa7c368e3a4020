#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqaudit {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Little-endian scalar append/read over a byte buffer. All container files
// (bundles, checkpoints) are written through this layer.
class ByteWriter {
public:
    template <class T>
    void put(T v) {
        static_assert(std::is_trivially_copyable_v<T>);
        const std::size_t off = buf_.size();
        buf_.resize(off + sizeof(T));
        std::memcpy(buf_.data() + off, &v, sizeof(T));
    }
    void put_bytes(const void* data, std::size_t len) {
        const std::size_t off = buf_.size();
        buf_.resize(off + len);
        std::memcpy(buf_.data() + off, data, len);
    }
    void put_string(const std::string& s) {
        put<std::uint64_t>(s.size());
        put_bytes(s.data(), s.size());
    }

    const std::vector<std::uint8_t>& bytes() const { return buf_; }
    std::vector<std::uint8_t>& bytes() { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    ByteReader(const std::uint8_t* data, std::size_t len) : data_(data), len_(len) {}
    explicit ByteReader(const std::vector<std::uint8_t>& v) : data_(v.data()), len_(v.size()) {}

    template <class T>
    T get() {
        static_assert(std::is_trivially_copyable_v<T>);
        require(sizeof(T));
        T v;
        std::memcpy(&v, data_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    void get_bytes(void* out, std::size_t len) {
        require(len);
        std::memcpy(out, data_ + pos_, len);
        pos_ += len;
    }
    std::string get_string() {
        const auto n = get<std::uint64_t>();
        require(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return len_ - pos_; }

private:
    void require(std::size_t n) const {
        if (pos_ + n > len_) throw IoError("truncated file: unexpected end of data");
    }
    const std::uint8_t* data_;
    std::size_t len_;
    std::size_t pos_ = 0;
};

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + path.string());
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> buf(size);
    if (size > 0) in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(size));
    if (!in) throw IoError("failed reading file: " + path.string());
    return buf;
}

// Write-temp-then-rename so a crash never leaves a torn file behind.
inline void atomic_write_file(const std::filesystem::path& path,
                              const void* data, std::size_t len) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open file for writing: " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
        out.flush();
        if (!out) throw IoError("failed writing file: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("failed renaming " + tmp.string() + " -> " + path.string() +
                          ": " + ec.message());
}

inline void atomic_write_file(const std::filesystem::path& path,
                              const std::vector<std::uint8_t>& bytes) {
    atomic_write_file(path, bytes.data(), bytes.size());
}

inline void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
    atomic_write_file(path, text.data(), text.size());
}

}  // namespace seqaudit
