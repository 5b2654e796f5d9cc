#include "zdq/codec.hpp"

#include "zdq/rng.hpp"

namespace zdq {

namespace {

const Quantizer& select_quantizer(const CodecPolicy& policy, const Belief& belief) {
  const CanonicalTriplet& t = *policy.triplet;
  return t.actions[t.policy[t.h.grid->project(belief)]];
}

void maybe_reset(const CodecPolicy& policy, long clock, Belief& belief) {
  if (policy.period && clock % *policy.period == 0) belief = policy.reset_point;
}

}  // namespace

CodecPolicy make_periodic(const CanonicalTriplet& t, int period, Belief reset_point) {
  if (period < 1) fail(errc::config_error, "period must be at least 1");
  check_belief(reset_point);
  return {&t, period, std::move(reset_point)};
}

EncoderState make_encoder(const CodecPolicy& policy, Belief initial, bool noisy) {
  return {policy, std::move(initial), 0, noisy, {}};
}

DecoderState make_decoder(const CodecPolicy& policy, Belief initial) {
  return {policy, std::move(initial), 0};
}

int encode_step(EncoderState& state, int x, const MarkovModel& m) {
  if (state.pending) fail(errc::solve_failed, "encode_step while feedback is pending");
  maybe_reset(state.policy, state.clock, state.belief);
  const Quantizer& q = select_quantizer(state.policy, state.belief);
  int symbol = q(x);
  if (state.noisy) {
    state.pending = q;
    return symbol;
  }
  state.belief = filter_update(state.belief, q, symbol, m.transition);
  ++state.clock;
  return symbol;
}

void receive_feedback(EncoderState& state, int received, const MarkovModel& m, const Channel& ch) {
  if (!state.pending) fail(errc::solve_failed, "feedback without a pending transmission");
  state.belief = noisy_filter_update(state.belief, *state.pending, received, m.transition, ch);
  state.pending.reset();
  ++state.clock;
}

int decode_step(DecoderState& state, int received, const MarkovModel& m, const DistortionSpec& d,
                const std::optional<Channel>& channel) {
  maybe_reset(state.policy, state.clock, state.belief);
  const Quantizer& q = select_quantizer(state.policy, state.belief);
  int xhat;
  if (channel) {
    xhat = noisy_optimal_reproduction(state.belief, q, d, received, *channel);
    state.belief = noisy_filter_update(state.belief, q, received, m.transition, *channel);
  } else {
    xhat = optimal_reproduction(state.belief, q, d, received);
    state.belief = filter_update(state.belief, q, received, m.transition);
  }
  ++state.clock;
  return xhat;
}

SessionTrace run_session(const MarkovModel& m, const std::optional<Channel>& channel,
                         const CodecPolicy& policy, const DistortionSpec& d, int horizon,
                         std::uint64_t seed) {
  SessionTrace trace;
  std::vector<int> path = sample_path(m, horizon, derive_seed(seed, 0));
  std::mt19937_64 channel_gen(derive_seed(seed, 1));

  EncoderState enc = make_encoder(policy, m.initial, channel.has_value());
  DecoderState dec = make_decoder(policy, m.initial);

  trace.x.reserve(horizon);
  double total = 0.0;
  for (int t = 0; t < horizon; ++t) {
    int x = path[t];
    int q = encode_step(enc, x, m);
    int received = q;
    if (channel) {
      received = sample_index(&channel->t.a[static_cast<size_t>(q) * channel->output_size()],
                              channel->output_size(), uniform01(channel_gen));
      receive_feedback(enc, received, m, *channel);
    }
    int xhat = decode_step(dec, received, m, d, channel);
    if (enc.belief != dec.belief)
      fail(errc::solve_failed, "encoder and decoder beliefs diverged at step " + std::to_string(t));
    double dist = d.d.at(x, xhat);
    total += dist;
    trace.x.push_back(x);
    trace.q.push_back(q);
    trace.q_received.push_back(received);
    trace.xhat.push_back(xhat);
    trace.distortion.push_back(dist);
    trace.encoder_belief.push_back(enc.belief);
    trace.decoder_belief.push_back(dec.belief);
  }
  trace.mean_distortion = total / horizon;
  return trace;
}

}  // namespace zdq
