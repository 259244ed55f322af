#ifndef NOMARG_SRC_BINARY_IO_H_
#define NOMARG_SRC_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include "nomarg/error.h"

namespace nomarg::internal {

inline std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
  return v;
}

inline void put_u32(std::ostream& out, std::uint32_t v) {
  v = to_little(v);
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.write(buf, 4);
}

inline void put_bytes(std::ostream& out, std::string_view s) {
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void put_string(std::ostream& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  put_bytes(out, s);
}

inline void put_floats(std::ostream& out, std::span<const float> values) {
  for (float f : values) put_u32(out, std::bit_cast<std::uint32_t>(f));
}

// Reads exactly n bytes or throws FormatError naming `what`.
inline void get_exact(std::istream& in, char* dst, std::size_t n, const char* what) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw FormatError(std::string("truncated input while reading ") + what);
}

inline std::uint32_t get_u32(std::istream& in, const char* what) {
  char buf[4];
  get_exact(in, buf, 4, what);
  std::uint32_t v;
  std::memcpy(&v, buf, 4);
  return to_little(v);
}

inline std::string get_string(std::istream& in, const char* what, std::uint32_t max_len = 1u << 20) {
  std::uint32_t len = get_u32(in, what);
  if (len > max_len) throw FormatError(std::string("implausible string length in ") + what);
  std::string s(len, '\0');
  if (len) get_exact(in, s.data(), len, what);
  return s;
}

inline void get_floats(std::istream& in, std::span<float> dst, const char* what) {
  for (float& f : dst) f = std::bit_cast<float>(get_u32(in, what));
}

// True at a clean end of stream.
inline bool at_eof(std::istream& in) {
  return in.peek() == std::char_traits<char>::eof();
}

}  // namespace nomarg::internal

#endif  // NOMARG_SRC_BINARY_IO_H_
