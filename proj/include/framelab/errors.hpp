#ifndef FRAMELAB_ERRORS_HPP
#define FRAMELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace framelab {

// Library errors carry a machine-readable code; the CLI maps codes to exit
// statuses and report entries.
class Error : public std::runtime_error {
 public:
  enum class Code {
    alignment,     // coordinate not on the lattice
    domain,        // operation leaves the grid box
    spec_mismatch, // operands built on different grids
    resolution,    // grid too coarse for the requested objects
    inversion,     // frame operator not invertible at the requested tolerance
    auxiliary,     // seminormalization auxiliary precondition failed
    certificate,   // disjointness certificate invalid
    scale,         // requested instance exceeds representable scale
    unbounded,     // translation sequence exhausted before filling the ladder
    span,          // working span does not contain a required function
    config,        // invalid configuration / usage
    io,            // file read/write failure
  };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

  static const char* code_name(Code code) {
    switch (code) {
      case Code::alignment: return "alignment";
      case Code::domain: return "domain";
      case Code::spec_mismatch: return "spec_mismatch";
      case Code::resolution: return "resolution";
      case Code::inversion: return "inversion";
      case Code::auxiliary: return "auxiliary";
      case Code::certificate: return "certificate";
      case Code::scale: return "scale";
      case Code::unbounded: return "unbounded";
      case Code::span: return "span";
      case Code::config: return "config";
      case Code::io: return "io";
    }
    return "unknown";
  }

 private:
  Code code_;
};

}  // namespace framelab

#endif
