#pragma once

#include <stdexcept>
#include <string>

namespace rdid {

/// Invalid arguments or violated preconditions (bad configuration, wrong
/// dimensions, duplicate nodes). The CLI maps these to exit code 1.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Finite-precision breakdown of a numerical procedure. The CLI maps these to
/// exit code 2.
class NumericalBreakdown : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class DomainError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class DuplicateNodes : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class ResolutionError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class InsufficientData : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class DivideByZero : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class ZeroFilterCoefficient : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class SingularMatrix : public NumericalBreakdown {
public:
    using NumericalBreakdown::NumericalBreakdown;
};

class SingularJacobian : public SingularMatrix {
public:
    using SingularMatrix::SingularMatrix;
};

class RankDeficient : public NumericalBreakdown {
public:
    using NumericalBreakdown::NumericalBreakdown;
};

class NoConvergence : public NumericalBreakdown {
public:
    using NumericalBreakdown::NumericalBreakdown;
};

class NewtonDiverged : public NumericalBreakdown {
public:
    using NumericalBreakdown::NumericalBreakdown;
};

class ComplexNodes : public NumericalBreakdown {
public:
    using NumericalBreakdown::NumericalBreakdown;
};

class NonPositiveNode : public NumericalBreakdown {
public:
    using NumericalBreakdown::NumericalBreakdown;
};

class NonSymmetrizable : public NumericalBreakdown {
public:
    using NumericalBreakdown::NumericalBreakdown;
};

} // namespace rdid
