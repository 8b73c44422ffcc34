#pragma once

#include <stdexcept>
#include <string>

namespace nilgeo {

// Base class for every failure the library reports deliberately.
// `code()` is a stable machine-readable tag; `what()` carries details.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string &msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string &code() const { return code_; }

private:
  std::string code_;
};

#define NILGEO_DEFINE_ERROR(NAME)                                             \
  class NAME : public Error {                                                 \
  public:                                                                     \
    explicit NAME(const std::string &msg) : Error(#NAME, msg) {}              \
  }

NILGEO_DEFINE_ERROR(InputError);
NILGEO_DEFINE_ERROR(IndexOutOfRange);
NILGEO_DEFINE_ERROR(NotNilpotent);
NILGEO_DEFINE_ERROR(NotSubalgebra);
NILGEO_DEFINE_ERROR(NotIdeal);
NILGEO_DEFINE_ERROR(NotDerivation);
NILGEO_DEFINE_ERROR(NotDiagonalizable);
NILGEO_DEFINE_ERROR(NonPositiveEigenvalue);
NILGEO_DEFINE_ERROR(PairMismatch);
NILGEO_DEFINE_ERROR(DegenerateSample);
NILGEO_DEFINE_ERROR(NonConvergent);
NILGEO_DEFINE_ERROR(Singular);
NILGEO_DEFINE_ERROR(EmptyInput);
NILGEO_DEFINE_ERROR(OrbitNotStable);
NILGEO_DEFINE_ERROR(NotFinite);
NILGEO_DEFINE_ERROR(NotDiagonalForm);

#undef NILGEO_DEFINE_ERROR

} // namespace nilgeo
