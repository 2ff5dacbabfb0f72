/*
 * Copyright 2026 The hepack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hepack/slot/backend.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "hepack/common/error.hpp"

namespace hepack::slot {

namespace {

constexpr std::string_view kCiphertextMagic = "HPCT";
constexpr std::uint32_t kCiphertextVersion = 1;

void atomic_max(std::atomic<std::uint64_t>& target, std::uint64_t value) {
  std::uint64_t current = target.load();
  while (current < value && !target.compare_exchange_weak(current, value)) {
  }
}

}  // namespace

PlainVec PlainVec::one_hot(std::size_t size, std::size_t index) {
  if (index >= size) throw DimensionError("one-hot index out of range");
  PlainVec v(size);
  v[index] = 1;
  return v;
}

bool PlainVec::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](std::int64_t x) { return x == 0; });
}

std::ostream& operator<<(std::ostream& os, const PlainVec& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i == 16 && v.size() > 20) {
      os << ", ... (" << v.size() << " slots)";
      break;
    }
    os << (i ? ", " : "") << v[i];
  }
  return os << ']';
}

CostReport operator-(const CostReport& after, const CostReport& before) {
  CostReport d = after;
  d.mult_count -= before.mult_count;
  d.cmult_count -= before.cmult_count;
  d.add_count -= before.add_count;
  d.rotation_count -= before.rotation_count;
  d.encrypt_count -= before.encrypt_count;
  return d;
}

std::string to_string(const CostReport& r) {
  std::ostringstream os;
  os << "mult=" << r.mult_count << " cmult=" << r.cmult_count << " add=" << r.add_count
     << " rot=" << r.rotation_count << " enc=" << r.encrypt_count
     << " peak_live=" << r.peak_live_ciphertexts << " max_level=" << r.max_level_used
     << " est_bytes=" << r.estimated_ciphertext_bytes;
  return os.str();
}

CiphertextData::~CiphertextData() {
  if (live_) live_->fetch_sub(1);
}

Backend::Backend(BackendParams params)
    : params_(std::move(params)),
      fingerprint_(0),
      live_(std::make_shared<std::atomic<std::int64_t>>(0)) {
  params_.validate();
  fingerprint_ = params_.fingerprint();
}

Backend::~Backend() = default;

Backend::PeakModelGuard::PeakModelGuard(Backend& backend) : backend_(backend) {
  backend_.modeled_sections_.fetch_add(1);
}

Backend::PeakModelGuard::~PeakModelGuard() { backend_.modeled_sections_.fetch_sub(1); }

void Backend::note_peak(std::uint64_t live_count) { atomic_max(peak_live_, live_count); }

Ciphertext Backend::wrap(std::shared_ptr<CiphertextData> data, std::size_t level) {
  data->live_ = live_;
  const std::int64_t now = live_->fetch_add(1) + 1;
  if (modeled_sections_.load() == 0) note_peak(static_cast<std::uint64_t>(now));
  atomic_max(max_level_, level);
  return Ciphertext(std::move(data), level, fingerprint_);
}

void Backend::check_operand(const Ciphertext& c, const char* op) const {
  if (c.empty()) throw DimensionError(std::string(op) + ": empty ciphertext");
  if (c.params_fingerprint() != fingerprint_) {
    throw ParamMismatch(std::string(op) + ": ciphertext belongs to a different parameter set");
  }
}

void Backend::check_plain(const PlainVec& w, const char* op) const {
  if (w.size() != params_.slot_count) {
    throw DimensionError(std::string(op) + ": plaintext has " + std::to_string(w.size()) +
                         " slots, expected " + std::to_string(params_.slot_count));
  }
}

std::size_t Backend::next_level(std::size_t level, const char* op) const {
  if (level + 1 > params_.depth_budget) {
    throw BudgetExhausted(std::string(op) + ": depth budget " +
                          std::to_string(params_.depth_budget) + " exhausted");
  }
  return level + 1;
}

Ciphertext Backend::encrypt(const PlainVec& v) {
  check_plain(v, "encrypt");
  auto data = do_encrypt(v);
  encrypt_count_.fetch_add(1);
  return wrap(std::move(data), 0);
}

PlainVec Backend::decrypt(const Ciphertext& c) {
  check_operand(c, "decrypt");
  if (c.level() > params_.depth_budget) {
    throw BudgetExhausted("decrypt: ciphertext level " + std::to_string(c.level()) +
                          " exceeds depth budget " + std::to_string(params_.depth_budget));
  }
  return do_decrypt(*c.data_);
}

Ciphertext Backend::add(const Ciphertext& a, const Ciphertext& b) {
  check_operand(a, "add");
  check_operand(b, "add");
  auto data = do_add(*a.data_, *b.data_);
  add_count_.fetch_add(1);
  return wrap(std::move(data), std::max(a.level(), b.level()));
}

Ciphertext Backend::add_plain(const Ciphertext& a, const PlainVec& w) {
  check_operand(a, "add_plain");
  check_plain(w, "add_plain");
  auto data = do_add_plain(*a.data_, w);
  add_count_.fetch_add(1);
  return wrap(std::move(data), a.level());
}

Ciphertext Backend::mult(const Ciphertext& a, const Ciphertext& b) {
  check_operand(a, "mult");
  check_operand(b, "mult");
  const std::size_t level = next_level(std::max(a.level(), b.level()), "mult");
  auto data = do_mult(*a.data_, *b.data_);
  mult_count_.fetch_add(1);
  return wrap(std::move(data), level);
}

Ciphertext Backend::cmult(const Ciphertext& a, const PlainVec& w) {
  check_operand(a, "cmult");
  check_plain(w, "cmult");
  const std::size_t level = next_level(a.level(), "cmult");
  auto data = do_cmult(*a.data_, w);
  cmult_count_.fetch_add(1);
  return wrap(std::move(data), level);
}

Ciphertext Backend::rotate(const Ciphertext& a, std::int64_t offset) {
  check_operand(a, "rotate");
  const auto n = static_cast<std::int64_t>(params_.slot_count);
  const auto r = static_cast<std::size_t>(((offset % n) + n) % n);
  rotation_count_.fetch_add(1);
  if (r == 0) return a;
  return wrap(do_rotate(*a.data_, r), a.level());
}

Ciphertext Backend::partial_sum(const Ciphertext& a, std::size_t block) {
  check_operand(a, "partial_sum");
  if (block == 0 || block > params_.slot_count) {
    throw DimensionError("partial_sum: block " + std::to_string(block) +
                         " outside [1, slot_count]");
  }
  // windows[j] holds, at every slot i, the sum of slots [i, i + 2^j).
  const int top = std::bit_width(block) - 1;
  std::vector<Ciphertext> windows{a};
  windows.reserve(static_cast<std::size_t>(top) + 1);
  for (int j = 1; j <= top; ++j) {
    const Ciphertext& prev = windows.back();
    windows.push_back(add(prev, rotate(prev, std::int64_t{1} << (j - 1))));
  }
  Ciphertext acc = windows[static_cast<std::size_t>(top)];
  std::int64_t covered = std::int64_t{1} << top;
  for (int j = top - 1; j >= 0; --j) {
    if ((block >> j) & 1) {
      acc = add(acc, rotate(windows[static_cast<std::size_t>(j)], covered));
      covered += std::int64_t{1} << j;
    }
  }
  return acc;
}

Ciphertext Backend::all_sum(const Ciphertext& a, std::size_t region) {
  check_operand(a, "all_sum");
  if (region == 0 || region > params_.slot_count) {
    throw DimensionError("all_sum: region " + std::to_string(region) +
                         " outside [1, slot_count]");
  }
  Ciphertext acc = a;
  for (std::size_t step = 1; step < region; step <<= 1) {
    acc = add(acc, rotate(acc, static_cast<std::int64_t>(step)));
  }
  return acc;
}

void Backend::serialize(const Ciphertext& c, ByteWriter& out) const {
  check_operand(c, "serialize");
  out.put_magic(kCiphertextMagic);
  out.put_u32(kCiphertextVersion);
  out.put_u64(fingerprint_);
  out.put_u64(c.level());
  do_serialize(*c.data_, out);
}

Ciphertext Backend::deserialize(ByteReader& in) {
  in.expect_magic(kCiphertextMagic);
  if (in.get_u32() != kCiphertextVersion) throw FormatError("unsupported ciphertext version");
  if (in.get_u64() != fingerprint_) {
    throw ParamMismatch("ciphertext was written under different parameters");
  }
  const std::uint64_t level = in.get_u64();
  if (level > params_.depth_budget) throw FormatError("ciphertext level exceeds depth budget");
  return wrap(do_deserialize(in), static_cast<std::size_t>(level));
}

CostReport Backend::cost_report() const {
  CostReport r;
  r.mult_count = mult_count_.load();
  r.cmult_count = cmult_count_.load();
  r.add_count = add_count_.load();
  r.rotation_count = rotation_count_.load();
  r.encrypt_count = encrypt_count_.load();
  r.peak_live_ciphertexts = peak_live_.load();
  r.max_level_used = max_level_.load();
  r.estimated_ciphertext_bytes = r.peak_live_ciphertexts * params_.ciphertext_bytes();
  return r;
}

void Backend::reset_counters() {
  mult_count_ = 0;
  cmult_count_ = 0;
  add_count_ = 0;
  rotation_count_ = 0;
  encrypt_count_ = 0;
  max_level_ = 0;
  peak_live_ = static_cast<std::uint64_t>(std::max<std::int64_t>(0, live_->load()));
}

}  // namespace hepack::slot
