#pragma once

// Little-endian scalar io shared by the C2VD / C2IX readers and writers.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "certicos/vecstore.hpp"

namespace certicos::detail {

static_assert(std::endian::native == std::endian::little,
              "serializers assume a little-endian host");

template <typename T>
void write_scalar(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool read_scalar(std::istream& in, T& value) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return in.gcount() == static_cast<std::streamsize>(sizeof(T));
}

template <typename T>
T read_scalar_or_throw(std::istream& in, const char* what) {
    T value;
    if (!read_scalar(in, value)) {
        throw TruncationError(std::string("unexpected end of file reading ") + what);
    }
    return value;
}

inline void write_magic(std::ostream& out, const char magic[4]) {
    out.write(magic, 4);
}

// In-memory variants, for formats that checksum their payload before it hits
// the file.

template <typename T>
void append_scalar(std::vector<uint8_t>& buf, T value) {
    const auto* p = reinterpret_cast<const uint8_t*>(&value);
    buf.insert(buf.end(), p, p + sizeof(T));
}

inline void append_bytes(std::vector<uint8_t>& buf, const void* data, size_t len) {
    const auto* p = static_cast<const uint8_t*>(data);
    buf.insert(buf.end(), p, p + len);
}

class ByteCursor {
  public:
    ByteCursor(const uint8_t* data, size_t size) : data_(data), size_(size) {}

    template <typename T>
    T take(const char* what) {
        T value;
        if (pos_ + sizeof(T) > size_)
            throw TruncationError(std::string("unexpected end of file reading ") + what);
        std::memcpy(&value, data_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    void take_into(void* out, size_t len, const char* what) {
        if (pos_ + len > size_)
            throw TruncationError(std::string("unexpected end of file reading ") + what);
        std::memcpy(out, data_ + pos_, len);
        pos_ += len;
    }

    size_t remaining() const { return size_ - pos_; }

  private:
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

inline bool read_magic(std::istream& in, const char expected[4]) {
    char got[4];
    in.read(got, 4);
    return in.gcount() == 4 && std::memcmp(got, expected, 4) == 0;
}

}  // namespace certicos::detail
