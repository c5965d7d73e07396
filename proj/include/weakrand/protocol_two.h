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

#ifndef WEAKRAND_PROTOCOL_TWO_H
#define WEAKRAND_PROTOCOL_TWO_H

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "json.hpp"
#include "weakrand/assemblage.h"
#include "weakrand/parallel.h"
#include "weakrand/sv_source.h"

namespace weakrand {

struct DeviceModelTwo;

namespace device2 {

/// Sigma_GHZ on every run.
struct HonestGHZ {};

/// A fixed LHS assemblage on every run.
struct LhsCheat {
    Assemblage assemblage;
};

/// One assemblage is drawn once per execution with the given weights.
struct MixtureAssemblage {
    std::vector<double> weights;
    std::vector<Assemblage> assemblages;
};

struct PerRunAssemblages {
    std::vector<Assemblage> assemblages;
};

}  // namespace device2

struct DeviceModelTwo {
    std::variant<device2::HonestGHZ, device2::LhsCheat, device2::MixtureAssemblage, device2::PerRunAssemblages> model;
};

/// LHS assemblage attaining the bound against Sigma_GHZ.
DeviceModelTwo optimal_lhs_cheat();

struct ProtocolTwoConfig {
    std::size_t runs = 0;  // M, a power of two
    double epsilon = 0.0;
    SourceStrategy source = strategy::Honest{};
    DeviceModelTwo device;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;

    void validate() const;
};

struct RunRecordTwo {
    std::uint8_t x = 0, y = 0, a = 0, b = 0;
    /// Assemblage::index of the entry whose normalized state Charlie holds.
    std::uint8_t state_id = 0;
};

struct ProtocolTwoResult {
    bool accepted = false;
    std::optional<std::uint8_t> output_bit;
    double z_s = 0.0;
    std::optional<std::size_t> selected_run;
    std::size_t device_component = 0;
    std::vector<RunRecordTwo> transcript;
};

/// Tr[(I - rho_{ab|xy}) sigma_tilde] with rho the normalized reference
/// entry (zero where the entry vanishes). ValidationError unless
/// sigma_tilde is a 2x2 operator of unit trace.
double indicator_B_S(unsigned a, unsigned b, unsigned x, unsigned y, const HermOp &sigma_tilde,
                     const Assemblage &reference);

/// (1 - (1/2 - eps)^2 (4 - sqrt 10) / 2)^M.
double lhs_accept_bound(double epsilon, std::size_t runs);

/// Runs the device once per trial with precomputed outcome tables.
class CompiledDeviceTwo {
   public:
    struct Table {
        std::array<double, 16> probs{};  // Tr sigma_{ab|xy}
        std::array<double, 16> b_s{};    // B_S of the normalized entry against Sigma_GHZ
    };
    struct Component {
        double weight = 1.0;
        std::shared_ptr<const std::vector<Table>> tables;  // size 1: fixed
        const Table &for_run(std::size_t i) const { return (*tables)[tables->size() == 1 ? 0 : i]; }
    };

    CompiledDeviceTwo(const DeviceModelTwo &model, std::size_t runs);
    const std::vector<Component> &components() const { return components_; }
    std::size_t pick(double u) const;

   private:
    std::vector<Component> components_;
};

ProtocolTwoResult run_protocol_two(const ProtocolTwoConfig &cfg);
ProtocolTwoResult run_protocol_two(const ProtocolTwoConfig &cfg, const CompiledDeviceTwo &dev, std::uint64_t seed,
                                   bool record = true);

struct ProtocolTwoSummary {
    std::size_t trials = 0;
    Proportion accept;
    Proportion output_zero;  // among accepted trials
    double mean_z_s = 0.0;
    double max_z_s = 0.0;
    /// output_zero.rate - 1/2, zero when nothing was accepted.
    double bias = 0.0;
};

ProtocolTwoSummary monte_carlo_protocol_two(const ProtocolTwoConfig &cfg, std::size_t trials,
                                            std::vector<ProtocolTwoResult> *per_trial = nullptr);

nlohmann::json to_json(const DeviceModelTwo &d);
DeviceModelTwo device_two_from_json(const nlohmann::json &j);
nlohmann::json to_json(const ProtocolTwoResult &r);
/// Keys: M, epsilon, source, device, tolerance, seed, trials, transcripts.
ProtocolTwoConfig protocol_two_config_from_json(const nlohmann::json &j);

}  // namespace weakrand

#endif  // WEAKRAND_PROTOCOL_TWO_H
