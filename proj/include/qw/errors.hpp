#pragma once

#include <stdexcept>
#include <string>

namespace qw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define QW_ERROR(Name)                  \
  struct Name : Error {                 \
    using Error::Error;                 \
  }

QW_ERROR(DomainError);
QW_ERROR(ValidationError);
QW_ERROR(ConvergenceError);
QW_ERROR(InternalConsistencyError);
QW_ERROR(SizeError);
QW_ERROR(FitError);
QW_ERROR(CutoffError);
QW_ERROR(EigensolveError);
QW_ERROR(ImaginaryResidueError);
QW_ERROR(IoError);

#undef QW_ERROR

}  // namespace qw
