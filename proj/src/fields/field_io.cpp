#include "mueg/fields/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mueg {

namespace {

void write_header(std::ostream& os, const GridSpec& g, int components) {
  char buf[64];
  os << "MUEG-FIELD 1\n";
  os << "dim " << g.dim << " components " << components << "\n";
  os << "origin";
  for (int a = 0; a < g.dim; ++a) {
    std::snprintf(buf, sizeof buf, " %.17g", g.origin[a]);
    os << buf;
  }
  os << "\nspacing";
  for (int a = 0; a < g.dim; ++a) {
    std::snprintf(buf, sizeof buf, " %.17g", g.spacing[a]);
    os << buf;
  }
  os << "\ncounts";
  for (int a = 0; a < g.dim; ++a) os << ' ' << g.counts[a];
  os << "\n";
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

double to_number(const std::string& s, const std::string& src, int line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(src, line, "expected a number, got '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& src, int line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(src, line, "expected an integer, got '" + s + "'");
  }
}

}  // namespace

void write_field_file(std::ostream& os, const GridSpec& g, int components, const std::vector<double>& values) {
  write_header(os, g, components);
  char buf[64];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    os << buf;
  }
}

void write_field_file(std::ostream& os, const GridSpec& g, int components, const std::vector<cplx>& values) {
  write_header(os, g, components);
  char buf[96];
  for (const cplx& v : values) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.real(), v.imag());
    os << buf;
  }
}

FieldFile read_field_file(std::istream& is, const std::string& src) {
  FieldFile f;
  std::string line;
  int lineno = 0;
  auto next = [&](const char* what) {
    if (!std::getline(is, line)) throw ParseError(src, lineno + 1, std::string("unexpected end of file, expected ") + what);
    ++lineno;
    return tokens(line);
  };
  auto t = next("magic line");
  if (t.size() != 2 || t[0] != "MUEG-FIELD") throw ParseError(src, lineno, "missing MUEG-FIELD magic");
  if (t[1] != "1") throw ParseError(src, lineno, "unsupported format version " + t[1]);
  t = next("dim line");
  if (t.size() != 4 || t[0] != "dim" || t[2] != "components")
    throw ParseError(src, lineno, "expected 'dim d components c'");
  f.grid.dim = to_int(t[1], src, lineno);
  f.components = to_int(t[3], src, lineno);
  if (f.grid.dim < 1 || f.grid.dim > 3) throw ParseError(src, lineno, "dim must be 1, 2 or 3");
  if (f.components < 1) throw ParseError(src, lineno, "components must be positive");
  const int d = f.grid.dim;
  const char* keys[3] = {"origin", "spacing", "counts"};
  for (int k = 0; k < 3; ++k) {
    t = next(keys[k]);
    if (static_cast<int>(t.size()) != d + 1 || t[0] != keys[k])
      throw ParseError(src, lineno, std::string("expected '") + keys[k] + "' followed by " + std::to_string(d) + " values");
    for (int a = 0; a < d; ++a) {
      if (k == 0) f.grid.origin[a] = to_number(t[a + 1], src, lineno);
      if (k == 1) f.grid.spacing[a] = to_number(t[a + 1], src, lineno);
      if (k == 2) f.grid.counts[a] = to_int(t[a + 1], src, lineno);
    }
  }
  try {
    f.grid.validate();
  } catch (const Error& e) {
    throw ParseError(src, lineno, e.what());
  }
  const std::size_t expected = f.grid.size() * f.components;
  f.values.reserve(expected);
  int width = 0;
  while (std::getline(is, line)) {
    ++lineno;
    t = tokens(line);
    if (t.empty()) continue;
    if (width == 0) {
      if (t.size() > 2) throw ParseError(src, lineno, "value line must hold one real or a 're im' pair");
      width = static_cast<int>(t.size());
      f.is_complex = width == 2;
    }
    if (static_cast<int>(t.size()) != width)
      throw ParseError(src, lineno, "inconsistent value line width");
    if (f.values.size() == expected) throw ParseError(src, lineno, "more values than the header declares");
    const double re = to_number(t[0], src, lineno);
    const double im = width == 2 ? to_number(t[1], src, lineno) : 0.0;
    f.values.emplace_back(re, im);
  }
  if (f.values.size() != expected)
    throw ParseError(src, lineno, "expected " + std::to_string(expected) + " values, found " + std::to_string(f.values.size()));
  return f;
}

FieldFile read_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open field file " + path);
  return read_field_file(in, path);
}

namespace {
template <class F>
void write_path(const std::string& path, const F& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write field file " + path);
  write_field(out, f);
}
}  // namespace

void write_field(const std::string& path, const ScalarField& f) { write_path(path, f); }
void write_field(const std::string& path, const VectorField& f) { write_path(path, f); }
void write_field(const std::string& path, const ComplexScalarField& f) { write_path(path, f); }

ScalarField to_scalar_field(const FieldFile& f) {
  if (f.components != 1 || f.is_complex) throw DomainError("field file is not a real scalar field");
  ScalarField out(f.grid);
  for (std::size_t p = 0; p < out.size(); ++p) out(p) = f.values[p].real();
  return out;
}

VectorField to_vector_field(const FieldFile& f) {
  if (f.components != f.grid.dim || f.is_complex) throw DomainError("field file is not a real vector field");
  VectorField out(f.grid);
  for (std::size_t k = 0; k < f.values.size(); ++k) out.values()[k] = f.values[k].real();
  return out;
}

ComplexScalarField to_complex_scalar_field(const FieldFile& f) {
  if (f.components != 1) throw DomainError("field file is not a scalar field");
  ComplexScalarField out(f.grid);
  for (std::size_t p = 0; p < out.size(); ++p) out(p) = f.values[p];
  return out;
}

}  // namespace mueg
