#include "ubsr/utility.hpp"

#include <cmath>
#include <sstream>

#include "ubsr/errors.hpp"

namespace ubsr {

Utility Utility::linear() { return Utility(Kind::Linear, 1.0, 0.0); }

Utility Utility::hinge() { return Utility(Kind::Hinge, 0.0, 0.0); }

Utility Utility::blend(double a, double tau) {
  if (!(a > 0.0 && a <= 1.0)) {
    throw InvalidArgument("blend utility requires a in (0,1], got " + std::to_string(a));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidArgument("blend utility requires tau > 0, got " + std::to_string(tau));
  }
  return Utility(Kind::SmoothHingeBlend, a, tau);
}

std::string Utility::to_string() const {
  switch (kind_) {
    case Kind::Linear:
      return "linear";
    case Kind::Hinge:
      return "hinge";
    case Kind::SmoothHingeBlend: {
      std::ostringstream os;
      os.precision(17);
      os << "blend:a=" << a_ << ",tau=" << tau_;
      return os.str();
    }
  }
  return "linear";
}

}  // namespace ubsr
