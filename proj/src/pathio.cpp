#include "jumpfrac/pathio.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "jumpfrac/error.hpp"
#include "jumpfrac/format.hpp"

namespace jumpfrac {

namespace {

constexpr char kMagic[8] = {'J', 'F', 'P', 'A', 'T', 'H', '0', '1'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint64_t kColumns = 8;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw ValidationError("truncated path file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_path_csv(const SamplePath& p, std::ostream& out) {
  out << "t,m,m_left,jump,x,y,z\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out << format_double(p.grid[i]) << ',' << format_double(p.values[i]) << ',' << format_double(p.left_values[i])
        << ',';
    if (p.is_jump[i]) out << format_double(p.jump_marks[i]);
    out << ',' << format_double(p.x[i]) << ',' << format_double(p.y[i]) << ',' << format_double(p.z[i]) << '\n';
  }
}

void write_path_binary(const SamplePath& p, std::ostream& out) {
  out.write(kMagic, 8);
  out.put(static_cast<char>(kVersion));
  put_u64(out, p.size());
  put_u64(out, kColumns);
  put_f64(out, p.x0);
  for (const auto* col : {&p.grid, &p.values, &p.left_values, &p.jump_marks, &p.x, &p.y, &p.z})
    for (double v : *col) put_f64(out, v);
  for (auto j : p.is_jump) put_f64(out, j ? 1.0 : 0.0);
}

SamplePath read_path_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw ValidationError("not a JFPATH01 file");
  const int version = in.get();
  if (version != kVersion) throw ValidationError("unsupported path file version");
  const std::uint64_t n = get_u64(in);
  if (get_u64(in) != kColumns) throw ValidationError("unexpected column count in path file");
  SamplePath p;
  p.x0 = get_f64(in);
  for (auto* col : {&p.grid, &p.values, &p.left_values, &p.jump_marks, &p.x, &p.y, &p.z}) {
    col->resize(n);
    for (auto& v : *col) v = get_f64(in);
  }
  p.is_jump.resize(n);
  for (auto& j : p.is_jump) j = get_f64(in) != 0.0 ? 1 : 0;
  return p;
}

}  // namespace jumpfrac
