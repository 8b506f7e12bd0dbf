#pragma once
#include <mec/controller.hpp>

namespace mec {

/// No offloading: zero transmit power, equal split, SP1 frequencies.
template <class Scalar>
inline SlotDecision<Scalar> local_only_policy(const PtsProblem<Scalar>& pb)
{
    SlotDecision<Scalar> d(pb.size());
    d.freqs = optimal_cpu_freqs(pb);
    return d;
}

/// Fixed equal bandwidth split; frequencies and powers from the closed forms at that split.
template <class Scalar>
inline SlotDecision<Scalar> static_equal_policy(const PtsProblem<Scalar>& pb)
{
    SlotDecision<Scalar> d(pb.size());
    d.freqs = optimal_cpu_freqs(pb);
    d.tx_powers = optimal_tx_powers(pb, d.bw_fracs);
    return d;
}

} // namespace mec
