#include "common/errors.hpp"

namespace facekit {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractError(msg);
}

}  // namespace facekit
