#include "arena/harness/checkpoint.hpp"

#include "arena/core/error.hpp"

namespace arena::harness {

namespace {

constexpr std::string_view kMagic = "HARLCKPT";

std::size_t checked_count(ByteReader& in, std::size_t min_bytes_each) {
  const auto n = in.u64();
  if (n > in.remaining() / std::max<std::size_t>(min_bytes_each, 1)) throw LoadError("checkpoint count out of range");
  return static_cast<std::size_t>(n);
}

void write_state(ByteWriter& out, const TrainerState& s) {
  out.i64(s.stage);
  out.i64(s.update);
  out.i64(s.stage_start_update);
  out.boolean(s.finished);
  harl::write_learners(out, s.learners);
  harl::write_learners(out, s.stage_initial);
  harl::write_env_batch(out, s.batch);
  out.u64(s.gate_history.size());
  for (const auto& rec : s.gate_history) {
    out.u64(rec.size());
    for (const auto& [k, v] : rec) {
      out.str(k);
      out.f64(v);
    }
  }
  out.u64(s.pool.episodes);
  out.f64s(s.pool.return_sum);
  out.f64(s.pool.reach_sum);
  out.f64(s.pool.block_out_sum);
  out.u64(s.metrics.size());
  for (const auto& r : s.metrics) write_metrics_row(out, r);
  out.u64(s.evals.size());
  for (const auto& e : s.evals) write_eval_row(out, e);
}

TrainerState read_state(ByteReader& in) {
  TrainerState s;
  s.stage = static_cast<int>(in.i64());
  s.update = static_cast<int>(in.i64());
  s.stage_start_update = static_cast<int>(in.i64());
  s.finished = in.boolean();
  s.learners = harl::read_learners(in);
  s.stage_initial = harl::read_learners(in);
  s.batch = harl::read_env_batch(in);
  s.gate_history.resize(checked_count(in, 8));
  for (auto& rec : s.gate_history) {
    const auto n = checked_count(in, 16);
    for (std::size_t k = 0; k < n; ++k) {
      auto key = in.str();
      rec[key] = in.f64();
    }
  }
  s.pool.episodes = in.u64();
  s.pool.return_sum = in.f64s();
  s.pool.reach_sum = in.f64();
  s.pool.block_out_sum = in.f64();
  s.metrics.resize(checked_count(in, 64));
  for (auto& r : s.metrics) r = read_metrics_row(in);
  s.evals.resize(checked_count(in, 64));
  for (auto& e : s.evals) e = read_eval_row(in);
  return s;
}

}  // namespace

Checkpoint make_checkpoint(const RunConfig& cfg, TrainerState state) {
  Checkpoint c;
  c.config_json = run_config_to_json(cfg);
  c.config_hash = crc32_of(c.config_json);
  c.state = std::move(state);
  return c;
}

std::string encode_checkpoint(const Checkpoint& ckpt) {
  ByteWriter out;
  out.raw(kMagic);
  out.u32(ckpt.version);
  out.u32(ckpt.config_hash);
  out.str(ckpt.config_json);
  write_state(out, ckpt.state);
  out.u32(crc32_of(out.bytes()));
  return out.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < kMagic.size() + 12 || bytes.substr(0, kMagic.size()) != kMagic) {
    throw LoadError("not a checkpoint file");
  }
  ByteReader head(bytes.substr(kMagic.size()));
  const auto version = head.u32();
  if (version != Checkpoint::kVersion) {
    throw LoadError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto body = bytes.substr(0, bytes.size() - 4);
  ByteReader tail(bytes.substr(bytes.size() - 4));
  if (tail.u32() != crc32_of(body)) throw LoadError("checkpoint checksum mismatch");

  ByteReader in(body.substr(kMagic.size()));
  Checkpoint c;
  c.version = in.u32();
  c.config_hash = in.u32();
  c.config_json = in.str();
  if (crc32_of(c.config_json) != c.config_hash) throw LoadError("checkpoint config hash mismatch");
  c.state = read_state(in);
  if (in.remaining() != 0) throw LoadError("trailing bytes in checkpoint");
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) { write_file(path, encode_checkpoint(ckpt)); }

Checkpoint load_checkpoint(const std::string& path) { return decode_checkpoint(read_file(path)); }

}  // namespace arena::harness
