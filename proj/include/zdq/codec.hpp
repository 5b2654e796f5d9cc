#pragma once

#include <cstdint>
#include <optional>

#include "zdq/solver.hpp"

namespace zdq {

// A solved policy as consumed by the online codec, optionally wrapped into
// the periodic variant that resets the belief to the invariant distribution
// every `period` steps (memory length = period).
struct CodecPolicy {
  const CanonicalTriplet* triplet = nullptr;
  std::optional<int> period;
  Belief reset_point;
};

inline CodecPolicy stationary_policy(const CanonicalTriplet& t) { return {&t, {}, {}}; }

CodecPolicy make_periodic(const CanonicalTriplet& t, int period, Belief reset_point);

// Zero-delay encoder. With feedback its belief matches the decoder's after
// every step, which is what makes belief-indexed policies realizable.
struct EncoderState {
  CodecPolicy policy;
  Belief belief;
  long clock = 0;
  bool noisy = false;
  std::optional<Quantizer> pending;  // quantizer in flight until feedback arrives
};

struct DecoderState {
  CodecPolicy policy;
  Belief belief;
  long clock = 0;
};

EncoderState make_encoder(const CodecPolicy& policy, Belief initial, bool noisy);
DecoderState make_decoder(const CodecPolicy& policy, Belief initial);

// Emits the channel symbol for the current source symbol. Noiseless mode
// advances the belief immediately; noisy mode defers to receive_feedback.
int encode_step(EncoderState& state, int x, const MarkovModel& m);

// Folds the observed channel output into the encoder belief (noisy mode).
void receive_feedback(EncoderState& state, int received, const MarkovModel& m, const Channel& ch);

// Consumes a received symbol, returns the reproduction, advances the belief
// with the same filter the encoder uses.
int decode_step(DecoderState& state, int received, const MarkovModel& m, const DistortionSpec& d,
                const std::optional<Channel>& channel);

struct SessionTrace {
  std::vector<int> x, q, q_received, xhat;
  std::vector<double> distortion;
  std::vector<Belief> encoder_belief, decoder_belief;  // after each step
  double mean_distortion = 0.0;
};

// Full deterministic-given-seed run of source, encoder, channel, decoder.
// Throws if the encoder and decoder beliefs ever diverge.
SessionTrace run_session(const MarkovModel& m, const std::optional<Channel>& channel,
                         const CodecPolicy& policy, const DistortionSpec& d, int horizon,
                         std::uint64_t seed);

}  // namespace zdq
