#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strata {

/// Base class for every library error. Subclasses map 1:1 onto the CLI
/// exit-code contract (see tools/strata_main.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No records / zero total where data is required.
class EmptyInput : public Error {
public:
    using Error::Error;
};

/// A value outside its domain (z or y not in {0,1}, bad label, bad index...).
class InvalidValue : public Error {
public:
    using Error::Error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// A conditional was requested on a zero-probability margin. `arm` is the
/// treatment value when the empty margin is an (x, z) cell, -1 when the
/// stratum itself has zero mass.
class PositivityViolation : public Error {
public:
    PositivityViolation(const std::string& stratum, int arm)
        : Error(arm < 0 ? "positivity violation: stratum '" + stratum + "' has zero mass"
                        : "positivity violation: stratum '" + stratum + "' has no mass in arm z=" +
                              std::to_string(arm)),
          stratum_(stratum),
          arm_(arm) {}
    const std::string& stratum() const { return stratum_; }
    int arm() const { return arm_; }

private:
    std::string stratum_;
    int arm_;
};

/// ScorePartition does not cover the stratum space it is applied to.
class InvalidPartition : public Error {
public:
    using Error::Error;
};

/// MergePlan/DualPlan inconsistent with the data it is applied to.
class InvalidPlan : public Error {
public:
    using Error::Error;
};

/// An inverse-probability weight of exactly 0 or 1 at some stratum.
class DegenerateWeight : public Error {
public:
    explicit DegenerateWeight(const std::string& stratum)
        : Error("degenerate weight: score is 0 or 1 at stratum '" + stratum + "'"),
          stratum_(stratum) {}
    const std::string& stratum() const { return stratum_; }

private:
    std::string stratum_;
};

/// Exhaustive partition enumeration requested beyond its hard cap.
class TooManyStrata : public Error {
public:
    using Error::Error;
};

/// A planted mixture equality has no solution inside [0,1].
class InfeasiblePlant : public Error {
public:
    using Error::Error;
};

}  // namespace strata
