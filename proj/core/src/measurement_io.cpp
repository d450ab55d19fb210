#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "hconvex/measurement.hpp"

namespace hconvex {

namespace {

struct Row {
  std::size_t line;
  double key;
  double x;
  double y;
  std::vector<double> values;
};

double parse_number(std::string_view tok, std::size_t line) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
  if (tok.empty()) throw ParseError("empty field", line);
  // from_chars rejects a leading '+', strtod does not; keep strtod semantics.
  std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ParseError("malformed number '" + s + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + s + "'", line);
  return v;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

// Sorted unique values, merging entries closer than `tol` relative to the span.
std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  const double span = v.empty() ? 0.0 : std::max(1.0, v.back() - v.front());
  for (double x : v) {
    if (out.empty() || x - out.back() > 1e-9 * span) out.push_back(x);
  }
  return out;
}

double uniform_step(const std::vector<double>& axis, const char* name) {
  if (axis.size() < 2) throw ParseError(std::string("lattice needs at least two ") + name + " values", 0);
  const double step = (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double expect = axis.front() + step * static_cast<double>(i);
    if (std::abs(axis[i] - expect) > 1e-6 * step) {
      throw ParseError(std::string("inconsistent lattice: ") + name + " values are not uniform", 0);
    }
  }
  return step;
}

struct Table {
  std::vector<double> keys;
  Lattice2D lattice;
  std::vector<std::vector<double>> columns;  // per value column, key-major PlanarData layout
};

Table read_table(const std::filesystem::path& path, const std::string& header, std::size_t n_values,
                 bool integer_keys) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    if (!have_header) {
      if (line != header) throw ParseError("expected header '" + header + "'", line_no);
      have_header = true;
      continue;
    }
    std::vector<std::string_view> toks;
    std::string_view rest(line);
    while (true) {
      const auto pos = rest.find(',');
      toks.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (toks.size() != 3 + n_values) {
      throw ParseError("malformed row: expected " + std::to_string(3 + n_values) + " fields", line_no);
    }
    Row r{line_no, parse_number(toks[0], line_no), parse_number(toks[1], line_no),
          parse_number(toks[2], line_no), {}};
    for (std::size_t c = 0; c < n_values; ++c) r.values.push_back(parse_number(toks[3 + c], line_no));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ParseError("no samples", have_header ? 0 : line_no);

  std::vector<double> ks, xs, ys;
  for (const auto& r : rows) {
    ks.push_back(r.key);
    xs.push_back(r.x);
    ys.push_back(r.y);
  }
  Table t;
  t.keys = unique_sorted(ks);
  const auto ux = unique_sorted(xs);
  const auto uy = unique_sorted(ys);
  const double sx = uniform_step(ux, "x");
  const double sy = uniform_step(uy, "y");
  if (std::abs(sx - sy) > 1e-6 * sx) throw ParseError("inconsistent lattice: x and y steps differ", 0);
  if (integer_keys) {
    for (std::size_t n = 0; n < t.keys.size(); ++n) {
      if (t.keys[n] != static_cast<double>(n)) throw ParseError("mode indices must be 0..N-1", 0);
    }
  }
  t.lattice = Lattice2D{ux.size(), uy.size(), ux.front(), uy.front(), sx};

  const std::size_t per_key = t.lattice.size();
  const std::size_t total = per_key * t.keys.size();
  t.columns.assign(n_values, std::vector<double>(total, 0.0));
  std::vector<char> seen(total, 0);

  auto locate = [](const std::vector<double>& axis, double v) {
    const auto it = std::lower_bound(axis.begin(), axis.end(), v - 1e-9 * std::max(1.0, std::abs(v)));
    return static_cast<std::size_t>(it - axis.begin());
  };
  for (const auto& r : rows) {
    const std::size_t kidx = locate(t.keys, r.key);
    const std::size_t i = locate(ux, r.x);
    const std::size_t j = locate(uy, r.y);
    const std::size_t flat = kidx * per_key + t.lattice.flat(i, j);
    if (seen[flat]) throw ParseError("duplicate sample key", r.line);
    seen[flat] = 1;
    for (std::size_t c = 0; c < n_values; ++c) t.columns[c][flat] = r.values[c];
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw ParseError("inconsistent lattice: " + std::to_string(total - std::count(seen.begin(), seen.end(), 1)) +
                         " samples missing",
                     0);
  }
  return t;
}

PlanarData assemble(const Table& t, std::size_t re_col, std::size_t im_col) {
  PlanarData d(t.lattice, t.keys.size());
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = {t.columns[re_col][i], t.columns[im_col][i]};
  return d;
}

void require_finite(const PlanarData& d, const char* what) {
  for (const auto& v : d.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError(std::string("refusing to write non-finite ") + what);
    }
  }
}

class Writer {
public:
  explicit Writer(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw IoError("cannot write " + path.string());
  }
  Writer& operator<<(const std::string& s) {
    out_ << s;
    return *this;
  }
  Writer& num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out_ << buf;
    return *this;
  }
  void finish(const std::filesystem::path& path) {
    out_.flush();
    if (!out_) throw IoError("write failed for " + path.string());
  }

private:
  std::ofstream out_;
};

}  // namespace

MeasurementSet load_measurements(const std::filesystem::path& path, double plane_z) {
  const Table t = read_table(path, "alpha,x,y,re,im", 2, false);
  MeasurementSet m;
  m.plane_z = plane_z;
  m.alphas = t.keys;
  m.samples = assemble(t, 0, 1);
  return m;
}

void save_measurements(const MeasurementSet& m, const std::filesystem::path& path) {
  if (m.samples.n_sources != m.alphas.size()) throw ShapeError("source count mismatch");
  require_finite(m.samples, "measurement samples");
  Writer w(path);
  w << "alpha,x,y,re,im\n";
  const auto& lat = m.samples.lattice;
  for (std::size_t s = 0; s < m.alphas.size(); ++s) {
    for (std::size_t i = 0; i < lat.nx; ++i) {
      for (std::size_t j = 0; j < lat.ny; ++j) {
        const cplx v = m.samples.at(s, i, j);
        w.num(m.alphas[s]) << ",";
        w.num(lat.x(i)) << ",";
        w.num(lat.y(j)) << ",";
        w.num(v.real()) << ",";
        w.num(v.imag()) << "\n";
      }
    }
  }
  w.finish(path);
}

void CauchyData::check() const {
  if (!psi0.lattice.matches(psi1.lattice) || psi0.n_sources != psi1.n_sources) {
    throw ShapeError("psi0 and psi1 must share the Gamma lattice and mode count");
  }
  for (const auto* d : {&psi0, &psi1}) {
    for (const auto& v : d->values) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("non-finite Cauchy data");
    }
  }
}

CauchyData load_cauchy(const std::filesystem::path& path) {
  const Table t = read_table(path, "n,x,y,re0,im0,re1,im1", 4, true);
  CauchyData c{assemble(t, 0, 1), assemble(t, 2, 3)};
  c.check();
  return c;
}

void save_cauchy(const CauchyData& c, const std::filesystem::path& path) {
  c.check();
  Writer w(path);
  w << "n,x,y,re0,im0,re1,im1\n";
  const auto& lat = c.lattice();
  for (std::size_t n = 0; n < c.n_modes(); ++n) {
    for (std::size_t i = 0; i < lat.nx; ++i) {
      for (std::size_t j = 0; j < lat.ny; ++j) {
        const cplx a = c.psi0.at(n, i, j);
        const cplx b = c.psi1.at(n, i, j);
        w << std::to_string(n) << ",";
        w.num(lat.x(i)) << ",";
        w.num(lat.y(j)) << ",";
        w.num(a.real()) << ",";
        w.num(a.imag()) << ",";
        w.num(b.real()) << ",";
        w.num(b.imag()) << "\n";
      }
    }
  }
  w.finish(path);
}

NearField load_near_field(const std::filesystem::path& path) {
  const Table t = read_table(path, "alpha,x,y,re,im,dre,dim", 4, false);
  return NearField{t.keys, assemble(t, 0, 1), assemble(t, 2, 3)};
}

void save_near_field(const NearField& f, const std::filesystem::path& path) {
  if (f.value.n_sources != f.alphas.size() || f.dz.n_sources != f.alphas.size() ||
      !f.value.lattice.matches(f.dz.lattice)) {
    throw ShapeError("near-field arrays disagree in shape");
  }
  require_finite(f.value, "near field");
  require_finite(f.dz, "near-field derivative");
  Writer w(path);
  w << "alpha,x,y,re,im,dre,dim\n";
  const auto& lat = f.value.lattice;
  for (std::size_t s = 0; s < f.alphas.size(); ++s) {
    for (std::size_t i = 0; i < lat.nx; ++i) {
      for (std::size_t j = 0; j < lat.ny; ++j) {
        const cplx a = f.value.at(s, i, j);
        const cplx b = f.dz.at(s, i, j);
        w.num(f.alphas[s]) << ",";
        w.num(lat.x(i)) << ",";
        w.num(lat.y(j)) << ",";
        w.num(a.real()) << ",";
        w.num(a.imag()) << ",";
        w.num(b.real()) << ",";
        w.num(b.imag()) << "\n";
      }
    }
  }
  w.finish(path);
}

}  // namespace hconvex
