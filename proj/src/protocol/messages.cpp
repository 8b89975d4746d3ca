#include "antroute/protocol/messages.hpp"

#include <stdexcept>

namespace antroute::protocol {

void validate(const PaymentRequest& request) {
  if (request.counter_start < 64 || request.counter_start >= 128) {
    throw std::invalid_argument("counter_start must lie in [64, 128)");
  }
  if (request.payer == request.payee) {
    throw std::invalid_argument("payer and payee must differ");
  }
  if (request.amount == 0) throw std::invalid_argument("amount must be positive");
  if (request.max_fees > 0x7fffffffU) {
    throw std::invalid_argument("max_fees must fit in 31 bits (2*f_max is carried in 32)");
  }
}

}  // namespace antroute::protocol
