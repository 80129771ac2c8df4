#pragma once
// Config-driven experiment commands behind the featcomp tool.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "featcomp/competition.hpp"
#include "featcomp/data.hpp"
#include "featcomp/train.hpp"

namespace featcomp::cli {

inline constexpr int kSchemaVersion = 1;

/// Bad config file, unknown key, or out-of-range value. Maps to exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct DataConfig {
    std::string source = "synth";  // synth | idx
    std::filesystem::path idx_images;
    std::filesystem::path idx_labels;
    std::size_t num_classes = 10;
    std::size_t image_size = 14;
    std::size_t per_class = 500;  // synth only
    std::uint64_t bank_seed = 1;
    std::size_t train_size = 8000;
    std::size_t test_size = 2000;
};

struct RunConfig {
    int schema = kSchemaVersion;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "out";
    DataConfig data;

    std::vector<double> surface_rho_l = unit_grid(11);
    std::vector<double> surface_rho_r = unit_grid(11);

    std::vector<double> sweep_rho_l{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> sweep_rho_r{0.0, 0.5, 0.75, 1.0};
    std::size_t sweep_replicates = 1;

    train::TrainConfig phase1;
    train::TrainConfig probe;
    train::ProbeScaling probe_scaling = train::ProbeScaling::Standardize;
    train::TrainConfig generative;  // AE, GAN and WGAN in table1

    std::filesystem::path scenario;
    std::vector<std::string> policies{"strict-alternation", "g-catchup"};
    std::size_t lead_k = 0;  // 0: derive from the scenario's learned counts
    std::size_t lead_l = 0;

    std::filesystem::path pmf;
    std::vector<std::size_t> mi_a;
    std::vector<std::size_t> mi_b;
    std::vector<std::size_t> mi_given;

    RunConfig();
    void validate() const;
};

/// INI text with sections run, data, surface, sweep, phase1, probe, generative, gansim, micalc.
/// Relative paths resolve against `base_dir`.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
/// Sets one `section.key` (or bare top-level key) from its text form. Does not validate the whole config.
void set_key(RunConfig& c, const std::string& name, const std::string& value,
             const std::filesystem::path& base_dir = {});
/// Canonical INI rendering of every field; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& c);

/// Two-pass sample correlation. Throws std::invalid_argument on length < 2 or zero variance.
double pearson_r(const std::vector<double>& xs, const std::vector<double>& ys);

/// Result of one command: exit status plus the human-readable summary already written to summary.txt.
struct CommandResult {
    int exit_code = 0;
    std::string summary;
};

struct SweepCell {
    double rho_l = 0.0;
    double rho_r = 0.0;
    std::size_t replicate = 0;
    double signal_bits = 0.0;
    std::optional<double> accuracy;  // empty when the cell failed
    std::uint64_t seed = 0;
    std::string status = "ok";
};

struct SweepReport {
    std::vector<SweepCell> cells;
    std::optional<double> pearson;  // over ok cells
    std::size_t excluded = 0;
};

struct Table1Row {
    std::string model;
    std::optional<double> trained;
    std::optional<double> untrained;
    std::uint64_t seed = 0;
    std::string status = "ok";
};

/// Bank named by the data section.
DigitBank make_bank(const DataConfig& d);

/// One sweep cell: phase-1 training on y_l at (rho_l, rho_r), then a probe on y_r over clean held-out pairs.
SweepCell run_sweep_cell(const RunConfig& c, const DigitBank& bank, double rho_l, double rho_r, std::size_t replicate);
SweepReport run_sweep(const RunConfig& c);
std::vector<Table1Row> run_table1(const RunConfig& c);

void write_sweep_csv(std::ostream& out, const SweepReport& r);
void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows);

// Commands. Each writes its files plus summary.txt into c.out_dir.
CommandResult cmd_surface(const RunConfig& c);
CommandResult cmd_sweep(const RunConfig& c);
CommandResult cmd_table1(const RunConfig& c);
CommandResult cmd_gansim(const RunConfig& c);
CommandResult cmd_micalc(const RunConfig& c);

/// Writes through a sibling temp file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace featcomp::cli
