#pragma once

#include <array>
#include <cstdint>

namespace dlab::rng {

// Purpose tags keep streams drawn for different roles disjoint under one master seed.
enum class StreamTag : std::uint64_t {
    Sampling = 1,
    Diffusion = 2,
    Bootstrap = 3,
    Lyapunov = 4,
    Neighbourhood = 5,
    Synthetic = 6,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Philox4x32-10 (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

// Counter-based stream addressed by (seed, tag, index). The draw position is explicit,
// so the k-th block of a stream never depends on how work was scheduled.
class Stream {
public:
    Stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept;

    void seek(std::uint64_t block) noexcept {
        block_ = block;
        have_ = 0;
    }
    std::uint64_t position() const noexcept { return block_; }

    std::uint64_t next_u64() noexcept;
    // Uniform on the open interval (0, 1).
    double uniform() noexcept;
    double normal() noexcept;

    // Three standard normals for time step `step`, drawn from blocks 2*step and 2*step+1.
    std::array<double, 3> step_noise(std::uint64_t step) noexcept;

private:
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t index_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int have_ = 0;
    bool spare_valid_ = false;
    double spare_ = 0.0;
};

}  // namespace dlab::rng
