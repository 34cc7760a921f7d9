#pragma once

#include <stdexcept>
#include <string>

namespace dtnflow {

/// A configuration fails one of the ellipticity/discreteness gates.
class GateError : public std::runtime_error {
 public:
  explicit GateError(const std::string& what) : std::runtime_error(what) {}
};

/// The two computation routes (branch flow vs. determinant), or a ledger
/// identity, disagree beyond tolerance. Always a bug trap, never tightened away.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dtnflow
