#pragma once

#include <stdexcept>
#include <string>

namespace tphom {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AlignmentError : public Error { public: using Error::Error; };
class DegenerateGeometryError : public Error { public: using Error::Error; };
class ScaleError : public Error { public: using Error::Error; };
class MaterialError : public Error { public: using Error::Error; };
class ConsistencyError : public Error { public: using Error::Error; };
class MeshContractError : public Error { public: using Error::Error; };
class WellPosednessError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class AssemblyError : public Error { public: using Error::Error; };
class SamplingError : public Error { public: using Error::Error; };

// Thrown when an iterative solve misses its tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : Error(what + " (residual " + std::to_string(residual) + " after " +
                std::to_string(iterations) + " iterations)"),
          residual_(residual), iterations_(iterations) {}
    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

}  // namespace tphom
