#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ccpb {

/// Base class for every error thrown by the toolkit.  Each concrete error
/// carries a stable kind() string so callers (tests, the CLI exit-code
/// mapping) can dispatch without RTTI gymnastics.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CCPB_DEFINE_ERROR(NAME)                                               \
    class NAME : public Error {                                               \
    public:                                                                   \
        explicit NAME(const std::string& message) : Error(#NAME, message) {}  \
    }

// model
CCPB_DEFINE_ERROR(NonPositiveParameter);
CCPB_DEFINE_ERROR(DielectricNotPositive);
CCPB_DEFINE_ERROR(InvalidDimension);
// mesh
CCPB_DEFINE_ERROR(DegenerateSpec);
CCPB_DEFINE_ERROR(MeshTooLarge);
CCPB_DEFINE_ERROR(LengthMismatch);
// solver
CCPB_DEFINE_ERROR(NonFiniteState);
CCPB_DEFINE_ERROR(NewtonDiverged);
CCPB_DEFINE_ERROR(SingularLinearSystem);
CCPB_DEFINE_ERROR(OutOfDomain);
// asymptotics
CCPB_DEFINE_ERROR(EqualConcentrations);
CCPB_DEFINE_ERROR(MalformedQuery);
CCPB_DEFINE_ERROR(NonPositiveGamma);
// diagnostics
CCPB_DEFINE_ERROR(KappaOutOfRange);
CCPB_DEFINE_ERROR(DegenerateDenominator);
CCPB_DEFINE_ERROR(InsufficientData);
// cli
CCPB_DEFINE_ERROR(ConfigParse);
CCPB_DEFINE_ERROR(UnknownSubcommand);

#undef CCPB_DEFINE_ERROR

/// Thrown by validate_params: collects every violated constraint so the
/// caller sees the full list in one pass instead of fixing them one by one.
class InvalidParams : public Error {
public:
    struct Violation {
        std::string kind;     // matches one of the error class names above
        std::string message;
    };

    explicit InvalidParams(std::vector<Violation> violations)
        : Error("InvalidParams", join(violations)), violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

    bool has(const std::string& kind) const {
        for (const auto& v : violations_)
            if (v.kind == kind) return true;
        return false;
    }

private:
    static std::string join(const std::vector<Violation>& vs) {
        std::string out;
        for (const auto& v : vs) {
            if (!out.empty()) out += "; ";
            out += v.kind + " (" + v.message + ")";
        }
        return out;
    }

    std::vector<Violation> violations_;
};

}  // namespace ccpb
