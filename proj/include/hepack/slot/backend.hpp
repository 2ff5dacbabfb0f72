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

#ifndef HEPACK_SLOT_BACKEND_HPP_
#define HEPACK_SLOT_BACKEND_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hepack/common/binary_io.hpp"
#include "hepack/slot/params.hpp"

namespace hepack::slot {

// A plaintext slot vector: one signed integer per slot, interpreted mod t.
class PlainVec {
 public:
  PlainVec() = default;
  explicit PlainVec(std::size_t size, std::int64_t fill = 0) : values_(size, fill) {}
  explicit PlainVec(std::vector<std::int64_t> values) : values_(std::move(values)) {}
  PlainVec(std::initializer_list<std::int64_t> values) : values_(values) {}

  static PlainVec one_hot(std::size_t size, std::size_t index);

  std::size_t size() const { return values_.size(); }
  std::int64_t& operator[](std::size_t i) { return values_[i]; }
  std::int64_t operator[](std::size_t i) const { return values_[i]; }
  std::span<const std::int64_t> values() const { return values_; }
  std::span<std::int64_t> values() { return values_; }
  bool is_zero() const;

  friend bool operator==(const PlainVec&, const PlainVec&) = default;

 private:
  std::vector<std::int64_t> values_;
};

std::ostream& operator<<(std::ostream& os, const PlainVec& v);

// Operation counters for a backend session.
struct CostReport {
  std::uint64_t mult_count = 0;
  std::uint64_t cmult_count = 0;
  std::uint64_t add_count = 0;  // includes plaintext additions
  std::uint64_t rotation_count = 0;
  std::uint64_t encrypt_count = 0;
  std::uint64_t peak_live_ciphertexts = 0;
  std::uint64_t max_level_used = 0;
  std::uint64_t estimated_ciphertext_bytes = 0;

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

// Counter differences between two snapshots of the same session. Peak and
// level fields are taken from `after`.
CostReport operator-(const CostReport& after, const CostReport& before);

std::string to_string(const CostReport& report);

class Backend;

// Backend-specific ciphertext payload. Construction and destruction are
// tracked so the backend can report how many ciphertexts are alive.
class CiphertextData {
 public:
  CiphertextData(const CiphertextData&) = delete;
  CiphertextData& operator=(const CiphertextData&) = delete;
  virtual ~CiphertextData();

 protected:
  CiphertextData() = default;

 private:
  friend class Backend;
  std::shared_ptr<std::atomic<std::int64_t>> live_;
};

// Immutable handle to an encrypted slot vector. Copies share the payload.
class Ciphertext {
 public:
  Ciphertext() = default;

  bool empty() const { return data_ == nullptr; }
  std::size_t level() const { return level_; }
  std::uint64_t params_fingerprint() const { return fingerprint_; }

  template <typename T>
  const T& data() const {
    return dynamic_cast<const T&>(*data_);
  }

 private:
  friend class Backend;
  Ciphertext(std::shared_ptr<const CiphertextData> data, std::size_t level,
             std::uint64_t fingerprint)
      : data_(std::move(data)), level_(level), fingerprint_(fingerprint) {}

  std::shared_ptr<const CiphertextData> data_;
  std::size_t level_ = 0;
  std::uint64_t fingerprint_ = 0;
};

// The SIMD ciphertext contract every higher layer is written against.
//
// Mult and CMult each consume one level; Add and rotations are free. Public
// operations validate operands, enforce the depth budget, update counters
// and delegate the arithmetic to the do_* hooks. All operations are safe to
// call concurrently; counter updates are atomic so totals do not depend on
// the schedule.
class Backend {
 public:
  explicit Backend(BackendParams params);
  Backend(const Backend&) = delete;
  Backend& operator=(const Backend&) = delete;
  virtual ~Backend();

  virtual std::string name() const = 0;

  const BackendParams& params() const { return params_; }
  std::size_t slot_count() const { return params_.slot_count; }
  std::uint64_t plain_modulus() const { return params_.plain_modulus; }

  Ciphertext encrypt(const PlainVec& v);
  // Centered slot values in (-t/2, t/2].
  PlainVec decrypt(const Ciphertext& c);

  Ciphertext add(const Ciphertext& a, const Ciphertext& b);
  Ciphertext add_plain(const Ciphertext& a, const PlainVec& w);
  Ciphertext mult(const Ciphertext& a, const Ciphertext& b);
  Ciphertext cmult(const Ciphertext& a, const PlainVec& w);
  // Cyclic left rotation: out[i] = a[(i + offset) mod slot_count].
  Ciphertext rotate(const Ciphertext& a, std::int64_t offset);

  // Slot j*block receives the sum of slots [j*block, (j+1)*block). Every
  // slot i actually holds the window sum of [i, i+block) with wrap-around.
  // Costs floor(log2 block) + popcount(block) - 1 rotations and no levels.
  Ciphertext partial_sum(const Ciphertext& a, std::size_t block);
  // Slot 0 receives the sum of slots [0, region); slots at index >= region
  // must be zero. Costs ceil(log2 region) rotations and no levels.
  Ciphertext all_sum(const Ciphertext& a, std::size_t region);

  void serialize(const Ciphertext& c, ByteWriter& out) const;
  Ciphertext deserialize(ByteReader& in);

  CostReport cost_report() const;
  void reset_counters();
  std::int64_t live_ciphertexts() const { return live_->load(); }

  // While at least one guard is alive, creating ciphertexts does not update
  // the peak; the code running the section reports a modeled peak instead.
  // Used around parallel sections so the reported peak does not depend on
  // the thread schedule.
  class PeakModelGuard {
   public:
    explicit PeakModelGuard(Backend& backend);
    PeakModelGuard(const PeakModelGuard&) = delete;
    PeakModelGuard& operator=(const PeakModelGuard&) = delete;
    ~PeakModelGuard();

   private:
    Backend& backend_;
  };
  void note_peak(std::uint64_t live_count);

 protected:
  virtual std::shared_ptr<CiphertextData> do_encrypt(const PlainVec& v) = 0;
  virtual PlainVec do_decrypt(const CiphertextData& c) = 0;
  virtual std::shared_ptr<CiphertextData> do_add(const CiphertextData& a, const CiphertextData& b) = 0;
  virtual std::shared_ptr<CiphertextData> do_add_plain(const CiphertextData& a, const PlainVec& w) = 0;
  virtual std::shared_ptr<CiphertextData> do_mult(const CiphertextData& a, const CiphertextData& b) = 0;
  virtual std::shared_ptr<CiphertextData> do_cmult(const CiphertextData& a, const PlainVec& w) = 0;
  // offset is already reduced to [1, slot_count).
  virtual std::shared_ptr<CiphertextData> do_rotate(const CiphertextData& a, std::size_t offset) = 0;
  virtual void do_serialize(const CiphertextData& c, ByteWriter& out) const = 0;
  virtual std::shared_ptr<CiphertextData> do_deserialize(ByteReader& in) = 0;

 private:
  Ciphertext wrap(std::shared_ptr<CiphertextData> data, std::size_t level);
  void check_operand(const Ciphertext& c, const char* op) const;
  void check_plain(const PlainVec& w, const char* op) const;
  std::size_t next_level(std::size_t level, const char* op) const;

  BackendParams params_;
  std::uint64_t fingerprint_;
  std::shared_ptr<std::atomic<std::int64_t>> live_;
  std::atomic<std::uint64_t> mult_count_{0};
  std::atomic<std::uint64_t> cmult_count_{0};
  std::atomic<std::uint64_t> add_count_{0};
  std::atomic<std::uint64_t> rotation_count_{0};
  std::atomic<std::uint64_t> encrypt_count_{0};
  std::atomic<std::uint64_t> peak_live_{0};
  std::atomic<std::uint64_t> max_level_{0};
  std::atomic<int> modeled_sections_{0};
};

}  // namespace hepack::slot

#endif  // HEPACK_SLOT_BACKEND_HPP_
