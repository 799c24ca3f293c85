#pragma once

#include <stdexcept>
#include <string>

namespace hodgelab {

// All failures surface as typed exceptions so callers (CLI, python bindings,
// tests) can distinguish "bad input" from "numerical breakdown".

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Field evaluation outside the operand's domain (division by zero, sqrt of a
// negative value, fractional power of a non-positive base, ...).
struct DomainError : Error { using Error::Error; };

// A form operation was asked for at an invalid degree (d at top degree,
// codifferential at degree zero, ...).
struct DegreeError : Error { using Error::Error; };

// Parse failure for field strings or config files; keeps line/column so the
// CLI can print a diagnostic and exit with status 2.
struct ParseError : Error {
  ParseError(const std::string& msg, int line_, int col_)
      : Error(msg + " (line " + std::to_string(line_) + ", column " +
              std::to_string(col_) + ")"),
        line(line_), col(col_) {}
  int line = 1;
  int col = 1;
};

struct ConfigError : ParseError { using ParseError::ParseError; };

struct UnsupportedDimension : Error { using Error::Error; };
struct UnsupportedShape : Error { using Error::Error; };
struct UnsupportedEmbedding : Error { using Error::Error; };

// Geometry errors.
struct NotOnBoundary : Error { using Error::Error; };
struct PoleProximity : Error { using Error::Error; };
struct SingularCell : Error { using Error::Error; };
struct NonManifold : Error { using Error::Error; };
struct NonOrientable : Error { using Error::Error; };
struct CurvatureUnavailable : Error { using Error::Error; };

// Potential V must be strictly positive where sampled.
struct NonpositiveV : Error { using Error::Error; };

// Linear algebra / spectral errors.
struct NotSPD : Error { using Error::Error; };
struct SolveFailure : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct GapAmbiguous : Error { using Error::Error; };
struct ThresholdAmbiguous : Error { using Error::Error; };
struct EmptyCoclosedSpace : Error { using Error::Error; };

} // namespace hodgelab
