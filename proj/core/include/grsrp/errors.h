#pragma once

#include <stdexcept>
#include <string>

namespace grsrp {

// Base class for every error raised by the library. The CLI maps the
// concrete type to a machine-readable name via type_name().
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    virtual const char *type_name() const noexcept { return "Error"; }
};

#define GRSRP_DEFINE_ERROR(Name)                                                                                       \
    class Name : public Error {                                                                                        \
      public:                                                                                                          \
        using Error::Error;                                                                                            \
        const char *type_name() const noexcept override { return #Name; }                                              \
    }

GRSRP_DEFINE_ERROR(NumericalFailure);
GRSRP_DEFINE_ERROR(DegenerateInput);
GRSRP_DEFINE_ERROR(AmbiguousDecomposition);
GRSRP_DEFINE_ERROR(InsufficientData);
GRSRP_DEFINE_ERROR(NoValidHypothesis);
GRSRP_DEFINE_ERROR(DivergenceDetected);
GRSRP_DEFINE_ERROR(GenerationFailed);
GRSRP_DEFINE_ERROR(TemplateError);
GRSRP_DEFINE_ERROR(ParseError);
GRSRP_DEFINE_ERROR(ValidationError);

#undef GRSRP_DEFINE_ERROR

} // namespace grsrp
