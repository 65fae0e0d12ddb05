#pragma once

#include <stdexcept>
#include <string>

namespace shadowlab {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Parameter record violates one or more standing constraints.
struct ConstraintViolation : Error {
    explicit ConstraintViolation(const std::string& what) : Error(what) {}
};

// Query outside the mathematical domain of an operation (e.g. arg at the origin).
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Caller broke a documented precondition.
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

// Root/bracket search exhausted its budget.
struct NotFoundError : Error {
    explicit NotFoundError(const std::string& what) : Error(what) {}
};

// Chart-local operation applied to a state outside the charts.
struct ChartError : Error {
    explicit ChartError(const std::string& what) : Error(what) {}
};

// Chart-local flow would cross the chart boundary; carries the crossing time.
struct ChartExitError : Error {
    double t_exit;
    ChartExitError(const std::string& what, double t) : Error(what), t_exit(t) {}
};

// Section offsets leave the transit tube.
struct TubeExitError : Error {
    explicit TubeExitError(const std::string& what) : Error(what) {}
};

// Trajectory history the chart atlas cannot represent.
struct ModelBoundaryError : Error {
    explicit ModelBoundaryError(const std::string& what) : Error(what) {}
};

// Cylinder-lemma geometry degeneracies.
struct DegenerateLines : Error {
    explicit DegenerateLines(const std::string& what) : Error(what) {}
};
struct SpiralTooCoarse : Error {
    explicit SpiralTooCoarse(const std::string& what) : Error(what) {}
};
struct NotInBall : Error {
    explicit NotInBall(const std::string& what) : Error(what) {}
};

// Reparametrization assembly from incompatible prescribed pieces.
struct IncompatiblePieces : Error {
    explicit IncompatiblePieces(const std::string& what) : Error(what) {}
};

// Shadowing-construction specific failures.
struct DeltaTooLarge : Error {
    explicit DeltaTooLarge(const std::string& what) : Error(what) {}
};
struct CaseDetectionAmbiguous : Error {
    explicit CaseDetectionAmbiguous(const std::string& what) : Error(what) {}
};
struct NoSectionCrossing : Error {
    explicit NoSectionCrossing(const std::string& what) : Error(what) {}
};
struct UnsupportedInput : Error {
    explicit UnsupportedInput(const std::string& what) : Error(what) {}
};

} // namespace shadowlab
