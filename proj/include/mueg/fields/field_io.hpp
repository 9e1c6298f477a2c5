#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mueg/fields/field.hpp"

namespace mueg {

// Text format:
//   MUEG-FIELD 1
//   dim d components c
//   origin ...
//   spacing ...
//   counts ...
// then one line per (point, component), points x-fastest, components of a point consecutive.
// Real values are one number per line, complex values "re im".
struct FieldFile {
  GridSpec grid;
  int components = 1;
  bool is_complex = false;
  std::vector<cplx> values;
};

void write_field_file(std::ostream& os, const GridSpec& g, int components, const std::vector<double>& values);
void write_field_file(std::ostream& os, const GridSpec& g, int components, const std::vector<cplx>& values);
FieldFile read_field_file(std::istream& is, const std::string& source = "<stream>");
FieldFile read_field_file(const std::string& path);

template <class T, Rank R>
void write_field(std::ostream& os, const Field<T, R>& f) {
  write_field_file(os, f.grid(), f.components(), f.values());
}
void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const VectorField& f);
void write_field(const std::string& path, const ComplexScalarField& f);

ScalarField to_scalar_field(const FieldFile& f);
VectorField to_vector_field(const FieldFile& f);
ComplexScalarField to_complex_scalar_field(const FieldFile& f);

}  // namespace mueg
