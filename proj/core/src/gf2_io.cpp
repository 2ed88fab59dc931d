#include "ktk/gf2_io.hpp"

#include <array>
#include <fstream>
#include <iterator>

#include "ktk/errors.hpp"

namespace ktk::io {

namespace {

constexpr std::uint8_t kVersion = 0x01;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t offset) {
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
  return x;
}

void check_header(const std::vector<std::uint8_t>& bytes, const char (&magic)[5], std::size_t min_size) {
  if (bytes.size() < min_size) throw FormatError(std::string("truncated ") + magic + " header");
  for (int i = 0; i < 4; ++i) {
    if (bytes[i] != static_cast<std::uint8_t>(magic[i])) throw FormatError(std::string("bad magic, expected ") + magic);
  }
  if (bytes[4] != kVersion) throw FormatError("unsupported format version");
}

}  // namespace

std::vector<std::uint8_t> encode_matrix(const BitMatrix& m) {
  std::vector<std::uint8_t> out{'G', 'F', '2', 'M', kVersion};
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  const std::size_t row_bytes = (m.cols() + 7) / 8;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto words = m.row(i).words();
    for (std::size_t b = 0; b < row_bytes; ++b) {
      out.push_back(static_cast<std::uint8_t>(words[b / 8] >> (8 * (b % 8))));
    }
  }
  return out;
}

BitMatrix decode_matrix(const std::vector<std::uint8_t>& bytes) {
  check_header(bytes, "GF2M", 13);
  const std::size_t rows = get_u32(bytes, 5);
  const std::size_t cols = get_u32(bytes, 9);
  const std::size_t row_bytes = (cols + 7) / 8;
  if (bytes.size() != 13 + rows * row_bytes) throw FormatError("GF2M payload size does not match header");
  BitMatrix m(rows, cols);
  std::size_t at = 13;
  for (std::size_t i = 0; i < rows; ++i) {
    auto words = m.row(i).words();
    for (std::size_t b = 0; b < row_bytes; ++b, ++at) {
      const std::uint8_t byte = bytes[at];
      if (8 * b + 8 > cols && (byte >> (cols - 8 * b)) != 0) throw FormatError("nonzero GF2M padding bits");
      words[b / 8] |= static_cast<BitVector::Word>(byte) << (8 * (b % 8));
    }
  }
  return m;
}

std::vector<std::uint8_t> encode_permutation(const Permutation& p) {
  std::vector<std::uint8_t> out{'P', 'E', 'R', 'M', kVersion};
  put_u32(out, static_cast<std::uint32_t>(p.size()));
  for (std::uint32_t x : p.image()) put_u32(out, x);
  return out;
}

Permutation decode_permutation(const std::vector<std::uint8_t>& bytes) {
  check_header(bytes, "PERM", 9);
  const std::size_t n = get_u32(bytes, 5);
  if (bytes.size() != 9 + 4 * n) throw FormatError("PERM payload size does not match header");
  std::vector<std::uint32_t> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = get_u32(bytes, 9 + 4 * i);
  try {
    return Permutation(std::move(img));
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_matrix(const std::filesystem::path& path, const BitMatrix& m) { write_file(path, encode_matrix(m)); }
BitMatrix read_matrix(const std::filesystem::path& path) { return decode_matrix(read_file(path)); }
void write_permutation(const std::filesystem::path& path, const Permutation& p) {
  write_file(path, encode_permutation(p));
}
Permutation read_permutation(const std::filesystem::path& path) { return decode_permutation(read_file(path)); }

}  // namespace ktk::io
