#pragma once

#include <cstddef>
#include <functional>

namespace beamlab {

/// Number of workers used by parallel loops; 0 selects hardware concurrency.
void setWorkerCount(unsigned workers) noexcept;
unsigned workerCount() noexcept;

/// Runs body(i) for i in [0, n) on the configured workers. Iterations must
/// be independent; the first exception thrown is rethrown after joining.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace beamlab
