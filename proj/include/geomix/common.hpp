#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace geomix {

// Error taxonomy used across modules. The code survives in what() so CLI
// output stays greppable.
enum class ErrCode {
    ConfigError,
    EmptyGraph,
    NoEdges,
    EmptySet,
    EmptyOrFull,
    TooLarge,
    DimensionMismatch,
    NoConvergence,
    Domain,
    Unsupported,
};

inline const char* err_name(ErrCode c) {
    switch (c) {
        case ErrCode::ConfigError: return "ConfigError";
        case ErrCode::EmptyGraph: return "EmptyGraph";
        case ErrCode::NoEdges: return "NoEdges";
        case ErrCode::EmptySet: return "EmptySet";
        case ErrCode::EmptyOrFull: return "EmptyOrFull";
        case ErrCode::TooLarge: return "TooLarge";
        case ErrCode::DimensionMismatch: return "DimensionMismatch";
        case ErrCode::NoConvergence: return "NoConvergence";
        case ErrCode::Domain: return "Domain";
        case ErrCode::Unsupported: return "Unsupported";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrCode code, const std::string& msg)
        : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
    ErrCode code() const { return code_; }

  private:
    ErrCode code_;
};

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Parallelism cap: GEOMIX_THREADS, else hardware_concurrency.
unsigned thread_budget();

// Run fn(i) for i in [0, count) on up to thread_budget() threads. fn must only
// write to its own slot; iteration order inside a thread is ascending so the
// result is identical to the serial loop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace geomix
