#include "hofa/errors.hpp"

namespace hofa {

CapExceeded::CapExceeded(const std::string& what, std::uint64_t needed, std::uint64_t cap)
    : Error(what + ": needs " + std::to_string(needed) + " operations, cap is " +
            std::to_string(cap)),
      needed_(needed),
      cap_(cap) {}

}  // namespace hofa
