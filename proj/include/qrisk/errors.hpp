#pragma once

#include <stdexcept>
#include <string>

namespace qrisk {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad inputs, shapes, or configuration. Maps to CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown at runtime (singularity, degeneracy). CLI exit code 3.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

class EmptyWindow : public ValidationError { public: using ValidationError::ValidationError; };
class IndexError : public ValidationError { public: using ValidationError::ValidationError; };
class DomainError : public ValidationError { public: using ValidationError::ValidationError; };
class InsufficientData : public ValidationError { public: using ValidationError::ValidationError; };
class ShapeError : public ValidationError { public: using ValidationError::ValidationError; };
class InvalidSpec : public ValidationError { public: using ValidationError::ValidationError; };
class InvalidPrior : public ValidationError { public: using ValidationError::ValidationError; };
class InvalidInput : public ValidationError { public: using ValidationError::ValidationError; };
class EmptyInput : public ValidationError { public: using ValidationError::ValidationError; };
class SchemaError : public ValidationError { public: using ValidationError::ValidationError; };
class ParseError : public ValidationError { public: using ValidationError::ValidationError; };
class IoError : public ValidationError { public: using ValidationError::ValidationError; };
class InfeasibleTarget : public ValidationError { public: using ValidationError::ValidationError; };

class DegenerateInput : public NumericalFailure { public: using NumericalFailure::NumericalFailure; };
class SingularDesign : public NumericalFailure { public: using NumericalFailure::NumericalFailure; };
class SingularCovariance : public NumericalFailure { public: using NumericalFailure::NumericalFailure; };
class DegenerateResampling : public NumericalFailure { public: using NumericalFailure::NumericalFailure; };
class ImproperPosterior : public NumericalFailure { public: using NumericalFailure::NumericalFailure; };
class DegeneratePortfolio : public NumericalFailure { public: using NumericalFailure::NumericalFailure; };
class ArbitrageError : public NumericalFailure { public: using NumericalFailure::NumericalFailure; };

}  // namespace qrisk
