#ifndef DBDPP_SAMPLER_HPP
#define DBDPP_SAMPLER_HPP

#include <cstdint>
#include <vector>

#include "dbdpp/discretize.hpp"

namespace dbdpp {

// One draw from the discretized process. Every draw is a pure function of
// (seed, stream); sample() uses stream 0.
Configuration sample(const DiscretizedKernel& dk, std::uint64_t seed);
Configuration sample_at(const DiscretizedKernel& dk, std::uint64_t seed,
                        std::uint64_t stream);

// n independent draws on streams stream_offset .. stream_offset + n - 1.
// Workers stripe over the sample index, so the result is byte-identical
// for any thread count.
std::vector<Configuration> sample_many(const DiscretizedKernel& dk,
                                       std::uint64_t seed, int n,
                                       std::uint64_t stream_offset = 0,
                                       int threads = 1);

}  // namespace dbdpp

#endif
