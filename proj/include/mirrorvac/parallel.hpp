#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace mirrorvac {

/// Worker count used when a caller passes 0. Initialised from the
/// MIRRORVAC_THREADS environment variable, else hardware concurrency.
int default_threads();
void set_default_threads(int n);

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// worker, so results written to per-index slots are independent of the
/// thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int threads = 0);

/// Non-fatal diagnostics (regime warnings, failed checked claims). The
/// default handler prints to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace mirrorvac
