// Copyright 2026 The weakrand Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WEAKRAND_PROTOCOL_ONE_H
#define WEAKRAND_PROTOCOL_ONE_H

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "json.hpp"
#include "weakrand/hardy_quantum.h"
#include "weakrand/ns_box.h"
#include "weakrand/parallel.h"
#include "weakrand/security_bounds.h"
#include "weakrand/sv_source.h"

namespace weakrand {

struct DeviceModel;

namespace device {

struct HonestQuantum {
    LadderStrategy strategy;
};

struct LocalDeterministic {
    std::uint32_t f = 0;  // bit x is Alice's answer to setting x
    std::uint32_t g = 0;
};

/// The same box, independently, on every run.
struct FixedBox {
    CondBox box;
};

/// One box per run, in run order.
struct PerRunBoxes {
    std::vector<CondBox> boxes;
};

/// One component is drawn once per execution with the given weights.
struct Mixture {
    std::vector<double> weights;
    std::vector<DeviceModel> models;
};

}  // namespace device

struct DeviceModel {
    std::variant<device::HonestQuantum, device::LocalDeterministic, device::FixedBox, device::PerRunBoxes,
                 device::Mixture>
        model;
};

DeviceModel honest_quantum_device(unsigned n_ladder);

/// A device reduced to a weighted list of run-independent components, each
/// a fixed box or a per-run box list. Shared, immutable, cheap to copy.
class CompiledDevice {
   public:
    struct Component {
        double weight = 1.0;
        std::shared_ptr<const std::vector<CondBox>> boxes;  // size 1: fixed
        const CondBox &box_for_run(std::size_t i) const { return (*boxes)[boxes->size() == 1 ? 0 : i]; }
    };

    /// Validates every box (no-signaling within 1e-9) and per-run lengths.
    CompiledDevice(const DeviceModel &model, unsigned n_ladder, std::size_t runs);

    const std::vector<Component> &components() const { return components_; }
    /// Component index for a uniform draw u in [0, 1).
    std::size_t pick(double u) const;

   private:
    std::vector<Component> components_;
};

struct ProtocolOneConfig {
    SecurityParams params;
    std::size_t runs = 0;  // M
    SourceStrategy source = strategy::Honest{};
    DeviceModel device;
    std::uint64_t seed = 0;

    /// N+1 a power of two, M >= 2 (N+1)^2, device consistent with N and M.
    void validate() const;
};

enum class AbortStage { kNone, kCardSH, kCardSHnz, kTest1, kTest2 };
const char *to_string(AbortStage s);

struct RunRecord {
    std::uint16_t x = 0, y = 0;
    std::uint8_t a = 0, b = 0;
};

struct ProtocolResult {
    bool accepted = false;
    AbortStage abort_stage = AbortStage::kNone;
    std::optional<std::uint8_t> output_bit;
    double z_h = 0.0;
    double z_hnz = 0.0;
    std::size_t s_h_size = 0;
    std::size_t s_hnz_size = 0;
    std::optional<std::size_t> selected_run;
    std::size_t device_component = 0;
    std::vector<RunRecord> transcript;
};

/// B_H: the outcome lands on a Hardy-zero cell. ValidationError on labels
/// out of range.
int indicator_B_H(unsigned a, unsigned b, unsigned x, unsigned y, unsigned n_ladder);
/// B_H-nz: (x, y) = (N, N) and (a, b) = (0, 0).
int indicator_B_Hnz(unsigned a, unsigned b, unsigned x, unsigned y, unsigned n_ladder);
/// Step-2 membership: adjacent ladder pairs, (0, 0) and (N, N).
bool in_S_H(unsigned x, unsigned y, unsigned n_ladder);

bool passes_card_SH(std::size_t size, std::size_t runs, unsigned n_ladder);
bool passes_card_SHnz(std::size_t size, std::size_t runs, unsigned n_ladder);
bool passes_test1(double z_h, double delta1);
bool passes_test2(double z_hnz, double delta2);

ProtocolResult run_protocol_one(const ProtocolOneConfig &cfg);
/// Same as above with a pre-compiled device; `record` controls the transcript.
ProtocolResult run_protocol_one(const ProtocolOneConfig &cfg, const CompiledDevice &dev, std::uint64_t seed,
                                bool record = true);

struct ProtocolOneSummary {
    std::size_t trials = 0;
    Proportion accept;
    /// Among accepted trials, how often the output was 0.
    Proportion output_zero;
    double mean_z_h = 0.0;
    double mean_z_hnz = 0.0;
    std::size_t max_z_h_nonzero = 0;  // trials with Z_H > 0
    std::array<std::size_t, 5> stage_counts{};
};

/// Independent trials keyed by cfg.seed and the trial index; the reduction
/// runs in trial order so the summary does not depend on the worker count.
/// `per_trial`, when non-null, receives every result in trial order.
ProtocolOneSummary monte_carlo_protocol_one(const ProtocolOneConfig &cfg, std::size_t trials,
                                            std::vector<ProtocolResult> *per_trial = nullptr);

/// One adversary branch: Eve holds classical label `label` with
/// probability `weight` and the device behaves as `device`.
struct AdversaryBranch {
    double weight = 1.0;
    std::uint32_t label = 0;
    DeviceModel device;
};

struct DistanceEstimate {
    double accept_probability = 0.0;
    /// sum over public transcripts and labels of |P(R=0, .) - P(R=1, .)|
    /// restricted to acceptance.
    double joint_distance = 0.0;
    /// joint_distance / accept_probability; empty if acceptance has zero probability.
    std::optional<double> conditional_distance;
    /// P(R = 0 | accept); empty if acceptance has zero probability.
    std::optional<double> output_zero_given_accept;
    /// Absolute error bound (exact mode: unenumerated probability mass) or
    /// three standard errors (sampling mode).
    double error = 0.0;
    bool exact = false;
    /// Acceptance probability below 1/2.
    bool abort_dominated = false;
};

/// Exact enumeration of every source bit string when `trials` == 0 (needs
/// M <= 8 and N = 1); otherwise settings are sampled `trials` times and the
/// device side is still evaluated exactly per sample.
DistanceEstimate distance_to_uniform_estimate(const ProtocolOneConfig &cfg, const std::vector<AdversaryBranch> &family,
                                              std::size_t trials);

nlohmann::json to_json(const DeviceModel &d);
DeviceModel device_from_json(const nlohmann::json &j, unsigned n_ladder);
nlohmann::json to_json(const ProtocolResult &r);
/// Keys: N, epsilon, M or r, source, device, seed, delta1 (optional).
ProtocolOneConfig protocol_one_config_from_json(const nlohmann::json &j);

}  // namespace weakrand

#endif  // WEAKRAND_PROTOCOL_ONE_H
