#pragma once

#include <stdexcept>
#include <string>

namespace cmcfol {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

#define CMCFOL_DEFINE_ERROR(NAME)                                        \
  class NAME : public error {                                            \
  public:                                                                \
    explicit NAME(const std::string& what) : error(what) {}              \
    const char* kind() const noexcept override { return #NAME; }         \
  };

CMCFOL_DEFINE_ERROR(domain_error)        // point outside a metric's domain
CMCFOL_DEFINE_ERROR(numerical_error)     // stencil/quadrature breakdown
CMCFOL_DEFINE_ERROR(shape_error)         // array/grid shape mismatch
CMCFOL_DEFINE_ERROR(degenerate_error)    // degenerate surface data
CMCFOL_DEFINE_ERROR(convergence_error)   // iterative scheme failed to converge
CMCFOL_DEFINE_ERROR(band_error)          // empty spectral band
CMCFOL_DEFINE_ERROR(causal_error)        // vector not timelike where required
CMCFOL_DEFINE_ERROR(frame_error)         // operation requires identity center
CMCFOL_DEFINE_ERROR(stall_error)         // balancing iteration stalled
CMCFOL_DEFINE_ERROR(regraph_error)       // surface no longer a graph
CMCFOL_DEFINE_ERROR(overlap_error)       // foliation leaves intersect
CMCFOL_DEFINE_ERROR(shoot_error)         // normal ray missed target leaf
CMCFOL_DEFINE_ERROR(range_error)         // argument outside attainable range
CMCFOL_DEFINE_ERROR(max_iterations)      // iteration cap reached
CMCFOL_DEFINE_ERROR(singular_jacobian)   // near-kernel linearization, recentering stalled
CMCFOL_DEFINE_ERROR(continuation_stall)  // step size underflow in continuation
CMCFOL_DEFINE_ERROR(config_error)        // malformed run configuration

#undef CMCFOL_DEFINE_ERROR

}  // namespace cmcfol
