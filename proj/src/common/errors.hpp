#pragma once

#include <stdexcept>
#include <string>

namespace facekit {

// Error taxonomy maps onto CLI exit codes: usage=1, data=2, numerical=3.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

void require(bool cond, const std::string& msg);

}  // namespace facekit
