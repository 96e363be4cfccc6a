#pragma once

#include <stdexcept>
#include <string>

namespace cll {

// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoCriticalPoint final : Error {
    explicit NoCriticalPoint(const std::string& m) : Error("NoCriticalPoint: " + m) {}
};
struct MultipleCriticalPoints final : Error {
    explicit MultipleCriticalPoints(const std::string& m) : Error("MultipleCriticalPoints: " + m) {}
};
struct DegenerateCritical final : Error {
    explicit DegenerateCritical(const std::string& m) : Error("DegenerateCritical: " + m) {}
};
struct NoAdmissibleDelta0 final : Error {
    explicit NoAdmissibleDelta0(const std::string& m) : Error("NoAdmissibleDelta0: " + m) {}
};
struct SingularSystem final : Error {
    explicit SingularSystem(const std::string& m) : Error("SingularSystem: " + m) {}
};
struct ResolutionGate final : Error {
    explicit ResolutionGate(const std::string& m) : Error("ResolutionGate: " + m) {}
};
struct SourceOutOfRange final : Error {
    explicit SourceOutOfRange(const std::string& m) : Error("SourceOutOfRange: " + m) {}
};
struct PossibleEigenvalue final : Error {
    PossibleEigenvalue(double lambda, double eps, const std::string& m)
        : Error("PossibleEigenvalue(lambda=" + std::to_string(lambda) +
                ", eps=" + std::to_string(eps) + "): " + m),
          lambda(lambda),
          eps(eps) {}
    double lambda;
    double eps;
};
struct SpectralHit final : Error {
    explicit SpectralHit(const std::string& m) : Error("SpectralHit: " + m) {}
};
struct UnresolvedOscillation final : Error {
    explicit UnresolvedOscillation(const std::string& m) : Error("UnresolvedOscillation: " + m) {}
};
struct NonConvergent final : Error {
    explicit NonConvergent(const std::string& m) : Error("NonConvergent: " + m) {}
};
struct StabilityViolation final : Error {
    explicit StabilityViolation(const std::string& m) : Error("StabilityViolation: " + m) {}
};
struct RootFindingFailure final : Error {
    explicit RootFindingFailure(const std::string& m) : Error("RootFindingFailure: " + m) {}
};
struct ConfigError final : Error {
    explicit ConfigError(const std::string& m) : Error("ConfigError: " + m) {}
};

}  // namespace cll
