#include "selflearn/errors.hpp"

namespace selflearn {

int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::config:
      return 2;
    case ErrorCategory::data:
      return 3;
    case ErrorCategory::numerical:
      return 4;
  }
  return 1;
}

}  // namespace selflearn
