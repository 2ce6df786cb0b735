#pragma once

#include <stdexcept>
#include <string>

namespace convac {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define CONVAC_ERROR(Name)                                        \
  struct Name : Error {                                           \
    explicit Name(const std::string& what) : Error(what) {}       \
    const char* kind() const noexcept override { return #Name; }  \
  };

CONVAC_ERROR(CurveDegenerate)
CONVAC_ERROR(ProjectionAmbiguous)
CONVAC_ERROR(ChartSingular)
CONVAC_ERROR(PotentialInvalid)
CONVAC_ERROR(SolvabilityViolated)
CONVAC_ERROR(SingularSystem)
CONVAC_ERROR(TransportViolated)
CONVAC_ERROR(CFLViolated)
CONVAC_ERROR(EliminationFailed)
CONVAC_ERROR(ResolutionInsufficient)
CONVAC_ERROR(LinearSolveDiverged)
CONVAC_ERROR(NonFinite)
CONVAC_ERROR(EigenIterationStalled)
CONVAC_ERROR(GridMismatch)
CONVAC_ERROR(DegenerateFit)
CONVAC_ERROR(ConfigError)

#undef CONVAC_ERROR

}  // namespace convac
