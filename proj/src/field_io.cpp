#include "superwave/field_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "superwave/error.hpp"

namespace superwave {

static_assert(std::endian::native == std::endian::little,
              "binary field I/O assumes a little-endian host");

namespace {

constexpr std::array<char, 4> kMagic{'S', 'W', 'F', '1'};
constexpr std::size_t kHeaderBytes = 64;

template <typename T>
void put(std::vector<char>& buf, T v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.insert(buf.end(), raw, raw + sizeof(T));
}

template <typename T>
T take(const std::vector<char>& buf, std::size_t& off) {
  T v;
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

std::string where(const std::filesystem::path& path) { return path.string(); }

void write_binary(const SampledField& f, const std::filesystem::path& path) {
  std::vector<char> buf;
  buf.reserve(kHeaderBytes + 16 * f.size());
  buf.insert(buf.end(), kMagic.begin(), kMagic.end());
  const bool two = f.is_2d();
  put<std::uint32_t>(buf, two ? 2u : 1u);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.nx()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(f.ny()));
  if (two) {
    const auto& g = f.grid2d();
    put(buf, g.dx());
    put(buf, g.dy());
    put(buf, g.origin_x());
    put(buf, g.origin_y());
  } else {
    const auto& g = f.grid1d();
    put(buf, g.spacing());
    put(buf, 0.0);
    put(buf, g.origin());
    put(buf, 0.0);
  }
  put(buf, f.log_scale());
  put<std::uint64_t>(buf, 0);
  for (const auto& v : f.values()) {
    put(buf, v.real());
    put(buf, v.imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + where(path) + "' for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for '" + where(path) + "'");
}

SampledField read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + where(path) + "'");
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderBytes)
    throw IoError(where(path) + ": truncated header (" + std::to_string(buf.size()) + " bytes)");
  if (!std::equal(kMagic.begin(), kMagic.end(), buf.begin()))
    throw IoError(where(path) + ": bad magic at offset 0, expected SWF1");
  std::size_t off = 4;
  const auto ndim = take<std::uint32_t>(buf, off);
  const auto nx = take<std::uint32_t>(buf, off);
  const auto ny = take<std::uint32_t>(buf, off);
  const auto sx = take<double>(buf, off);
  const auto sy = take<double>(buf, off);
  const auto ox = take<double>(buf, off);
  const auto oy = take<double>(buf, off);
  const auto log_scale = take<double>(buf, off);
  if (ndim != 1 && ndim != 2) throw IoError(where(path) + ": offset 4: ndim must be 1 or 2");
  if (ndim == 1 && ny != 1) throw IoError(where(path) + ": offset 12: 1D field with dims[1] != 1");
  const std::size_t count = static_cast<std::size_t>(nx) * ny;
  const std::size_t expect = kHeaderBytes + 16 * count;
  if (buf.size() != expect)
    throw IoError(where(path) + ": shape mismatch, header implies " + std::to_string(expect) +
                  " bytes, file has " + std::to_string(buf.size()));
  off = kHeaderBytes;
  std::vector<cdouble> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double re = take<double>(buf, off);
    const double im = take<double>(buf, off);
    if (!std::isfinite(re) || !std::isfinite(im))
      throw IoError(where(path) + ": non-finite value at offset " +
                    std::to_string(off - 16));
    values[i] = {re, im};
  }
  try {
    if (ndim == 1) return SampledField(Grid1D(nx, sx, ox), std::move(values), std::nullopt, log_scale);
    return SampledField(Grid2D(nx, ny, sx, sy, ox, oy), std::move(values), std::nullopt, log_scale);
  } catch (const std::invalid_argument& e) {
    throw IoError(where(path) + ": invalid header: " + e.what());
  }
}

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

void write_csv(const SampledField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + where(path) + "' for writing");
  if (f.log_scale() != 0.0) out << "# log_scale=" << fmt(f.log_scale()) << '\n';
  const auto vals = f.values();
  if (f.is_2d()) {
    const auto& g = f.grid2d();
    out << "x,y,re,im\n";
    for (std::size_t iy = 0; iy < g.ny(); ++iy)
      for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        const auto v = vals[g.index(ix, iy)];
        out << fmt(g.x(ix)) << ',' << fmt(g.y(iy)) << ',' << fmt(v.real()) << ','
            << fmt(v.imag()) << '\n';
      }
  } else {
    const auto& g = f.grid1d();
    out << "x,re,im\n";
    for (std::size_t i = 0; i < g.size(); ++i)
      out << fmt(g.coord(i)) << ',' << fmt(vals[i].real()) << ',' << fmt(vals[i].imag()) << '\n';
  }
  if (!out) throw IoError("write failed for '" + where(path) + "'");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
    std::size_t s = 0;
    while (s < cell.size() && cell[s] == ' ') ++s;
    cells.push_back(cell.substr(s));
  }
  return cells;
}

double parse_number(const std::string& text, const std::filesystem::path& path, std::size_t line,
                    const std::string& column) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw IoError(where(path) + ":" + std::to_string(line) + ": column '" + column +
                  "': cannot parse '" + text + "'");
  if (!std::isfinite(v))
    throw IoError(where(path) + ":" + std::to_string(line) + ": column '" + column +
                  "': non-finite value");
  return v;
}

// Recovers a uniform axis from its distinct coordinates.
void uniform_axis(const std::vector<double>& c, const std::filesystem::path& path,
                  const char* name, double& origin, double& spacing) {
  if (c.size() < 2) throw IoError(where(path) + ": axis " + name + " needs at least 2 samples");
  origin = c.front();
  spacing = (c.back() - c.front()) / static_cast<double>(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) {
    const double expect = origin + static_cast<double>(i) * spacing;
    if (std::abs(c[i] - expect) > 1e-9 * std::max(std::abs(spacing), std::abs(expect)))
      throw IoError(where(path) + ": axis " + name + " is not uniform at sample " +
                    std::to_string(i));
  }
  // Prefer the spacing between the first two samples when it is exact.
  if (std::abs(c[1] - c[0] - spacing) <= 1e-12 * std::abs(spacing)) spacing = c[1] - c[0];
}

SampledField read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + where(path) + "'");
  std::string line;
  std::size_t lineno = 0;
  double log_scale = 0.0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') {
      const std::string key = "# log_scale=";
      if (line.rfind(key, 0) == 0)
        log_scale = parse_number(split(line.substr(key.size())).at(0), path, lineno, "log_scale");
      continue;
    }
    header = split(line);
    break;
  }
  if (header.empty()) throw IoError(where(path) + ": missing header row");
  auto col = [&](const std::string& name) -> long {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<long>(i);
    return -1;
  };
  const long cx = col("x"), cy = col("y"), cre = col("re"), cim = col("im");
  for (const auto& [name, idx] : {std::pair{"x", cx}, {"re", cre}, {"im", cim}})
    if (idx < 0)
      throw IoError(where(path) + ":" + std::to_string(lineno) + ": missing column '" + name +
                    "'");
  const bool two = cy >= 0;
  std::vector<double> xs, ys;
  std::vector<cdouble> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw IoError(where(path) + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(header.size()) + " columns, found " +
                    std::to_string(cells.size()));
    xs.push_back(parse_number(cells[cx], path, lineno, "x"));
    if (two) ys.push_back(parse_number(cells[cy], path, lineno, "y"));
    values.emplace_back(parse_number(cells[cre], path, lineno, "re"),
                        parse_number(cells[cim], path, lineno, "im"));
  }
  double ox = 0, sx = 0;
  if (!two) {
    uniform_axis(xs, path, "x", ox, sx);
    return SampledField(Grid1D(xs.size(), sx, ox), std::move(values), std::nullopt, log_scale);
  }
  std::size_t nx = 1;
  while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
  if (values.size() % nx != 0)
    throw IoError(where(path) + ": shape mismatch, " + std::to_string(values.size()) +
                  " rows do not form rows of " + std::to_string(nx));
  const std::size_t ny = values.size() / nx;
  std::vector<double> xaxis(xs.begin(), xs.begin() + static_cast<long>(nx)), yaxis;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    yaxis.push_back(ys[iy * nx]);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t k = iy * nx + ix;
      if (xs[k] != xaxis[ix] || ys[k] != yaxis[iy])
        throw IoError(where(path) + ": shape mismatch at data row " + std::to_string(k + 1) +
                      " (expected row-major order with x fastest)");
    }
  }
  double oy = 0, sy = 0;
  uniform_axis(xaxis, path, "x", ox, sx);
  uniform_axis(yaxis, path, "y", oy, sy);
  return SampledField(Grid2D(nx, ny, sx, sy, ox, oy), std::move(values), std::nullopt, log_scale);
}

}  // namespace

FieldFormat field_format_from_string(std::string_view name) {
  if (name == "csv") return FieldFormat::csv;
  if (name == "binary" || name == "swf") return FieldFormat::binary;
  throw std::invalid_argument("unknown field format '" + std::string(name) + "'");
}

FieldFormat field_format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? FieldFormat::csv : FieldFormat::binary;
}

void write_field(const SampledField& field, const std::filesystem::path& path, FieldFormat format) {
  if (format == FieldFormat::csv)
    write_csv(field, path);
  else
    write_binary(field, path);
}

SampledField read_field(const std::filesystem::path& path, FieldFormat format) {
  return format == FieldFormat::csv ? read_csv(path) : read_binary(path);
}

}  // namespace superwave
