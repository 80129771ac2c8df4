#include "featcomp/runner.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "featcomp/gan_lab.hpp"
#include "featcomp/information.hpp"
#include "featcomp/joint_pmf.hpp"

namespace featcomp::cli {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string fmt(const char* f, double v) {
    if (std::abs(v) < 5e-13) v = 0.0;  // no "-0.000000000000" in reports
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---- value parsing --------------------------------------------------------------

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return x;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
    return out;
}

std::vector<std::size_t> to_indices(const std::string& key, const std::string& v) {
    std::vector<std::size_t> out;
    for (const auto& s : split_list(v)) out.push_back(to_u64(key, s));
    return out;
}

std::string show(double v) { return fmt("%.17g", v); }

template <class T>
std::string join(const std::vector<T>& xs, std::function<std::string(const T&)> f) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + f(xs[i]);
    return out;
}

std::string show_doubles(const std::vector<double>& xs) { return join<double>(xs, show); }
std::string show_indices(const std::vector<std::size_t>& xs) {
    return join<std::size_t>(xs, [](const std::size_t& i) { return std::to_string(i); });
}

// ---- key table ----------------------------------------------------------------------

struct Key {
    std::string name;  // section.key, or a bare key at top level
    std::function<void(RunConfig&, const std::string&, const fs::path&)> set;
    std::function<std::string(const RunConfig&)> get;
};

fs::path resolve(const fs::path& base, const std::string& v) {
    const fs::path p(v);
    return p.is_absolute() || base.empty() ? p : base / p;
}

void add_train_keys(std::vector<Key>& keys, const std::string& sec, train::TrainConfig RunConfig::*member) {
    keys.push_back({sec + ".optimizer",
                    [member](RunConfig& c, const std::string& v, const fs::path&) {
                        try {
                            (c.*member).optimizer.kind = nn::parse_optimizer(v);
                        } catch (const std::invalid_argument& e) {
                            throw ConfigError(e.what());
                        }
                    },
                    [member](const RunConfig& c) { return std::string(nn::optimizer_name((c.*member).optimizer.kind)); }});
    auto num = [&](const char* k, double nn::OptimizerConfig::*field) {
        const std::string name = sec + "." + k;
        keys.push_back({name,
                        [member, field, name](RunConfig& c, const std::string& v, const fs::path&) {
                            (c.*member).optimizer.*field = to_double(name, v);
                        },
                        [member, field](const RunConfig& c) { return show((c.*member).optimizer.*field); }});
    };
    num("lr", &nn::OptimizerConfig::learning_rate);
    num("beta1", &nn::OptimizerConfig::beta1);
    num("beta2", &nn::OptimizerConfig::beta2);
    auto count = [&](const char* k, std::size_t train::TrainConfig::*field) {
        const std::string name = sec + "." + k;
        keys.push_back({name,
                        [member, field, name](RunConfig& c, const std::string& v, const fs::path&) {
                            (c.*member).*field = to_u64(name, v);
                        },
                        [member, field](const RunConfig& c) { return std::to_string((c.*member).*field); }});
    };
    count("batch_size", &train::TrainConfig::batch_size);
    count("epochs", &train::TrainConfig::epochs);
}

const std::vector<Key>& key_table() {
    static const std::vector<Key> keys = [] {
        std::vector<Key> k;
        k.push_back({"schema",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.schema = static_cast<int>(to_u64("schema", v));
                     },
                     [](const RunConfig& c) { return std::to_string(c.schema); }});
        k.push_back({"run.seed", [](RunConfig& c, const std::string& v, const fs::path&) { c.seed = to_u64("run.seed", v); },
                     [](const RunConfig& c) { return std::to_string(c.seed); }});
        k.push_back({"run.out_dir",
                     [](RunConfig& c, const std::string& v, const fs::path& b) { c.out_dir = resolve(b, v); },
                     [](const RunConfig& c) { return c.out_dir.string(); }});

        k.push_back({"data.source", [](RunConfig& c, const std::string& v, const fs::path&) { c.data.source = v; },
                     [](const RunConfig& c) { return c.data.source; }});
        k.push_back({"data.idx_images",
                     [](RunConfig& c, const std::string& v, const fs::path& b) { c.data.idx_images = resolve(b, v); },
                     [](const RunConfig& c) { return c.data.idx_images.string(); }});
        k.push_back({"data.idx_labels",
                     [](RunConfig& c, const std::string& v, const fs::path& b) { c.data.idx_labels = resolve(b, v); },
                     [](const RunConfig& c) { return c.data.idx_labels.string(); }});
        auto data_count = [&](const char* name, std::size_t DataConfig::*f) {
            const std::string key = std::string("data.") + name;
            k.push_back({key, [f, key](RunConfig& c, const std::string& v, const fs::path&) { c.data.*f = to_u64(key, v); },
                         [f](const RunConfig& c) { return std::to_string(c.data.*f); }});
        };
        data_count("num_classes", &DataConfig::num_classes);
        data_count("image_size", &DataConfig::image_size);
        data_count("per_class", &DataConfig::per_class);
        data_count("train_size", &DataConfig::train_size);
        data_count("test_size", &DataConfig::test_size);
        k.push_back({"data.bank_seed",
                     [](RunConfig& c, const std::string& v, const fs::path&) { c.data.bank_seed = to_u64("data.bank_seed", v); },
                     [](const RunConfig& c) { return std::to_string(c.data.bank_seed); }});

        auto grid = [&](const char* name, std::vector<double> RunConfig::*f) {
            const std::string key = name;
            k.push_back({key, [f, key](RunConfig& c, const std::string& v, const fs::path&) { c.*f = to_doubles(key, v); },
                         [f](const RunConfig& c) { return show_doubles(c.*f); }});
        };
        grid("surface.rho_l", &RunConfig::surface_rho_l);
        grid("surface.rho_r", &RunConfig::surface_rho_r);
        grid("sweep.rho_l", &RunConfig::sweep_rho_l);
        grid("sweep.rho_r", &RunConfig::sweep_rho_r);
        k.push_back({"sweep.replicates",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.sweep_replicates = to_u64("sweep.replicates", v);
                     },
                     [](const RunConfig& c) { return std::to_string(c.sweep_replicates); }});

        add_train_keys(k, "phase1", &RunConfig::phase1);
        add_train_keys(k, "probe", &RunConfig::probe);
        k.push_back({"probe.scaling",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.probe_scaling = train::parse_probe_scaling(v);
                     },
                     [](const RunConfig& c) { return std::string(train::probe_scaling_name(c.probe_scaling)); }});
        add_train_keys(k, "generative", &RunConfig::generative);
        k.push_back({"generative.balance",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.generative.balance = train::GanBalance::parse(v);
                     },
                     [](const RunConfig& c) { return c.generative.balance.name(); }});
        k.push_back({"generative.critic_steps",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.generative.critic_steps = to_u64("generative.critic_steps", v);
                     },
                     [](const RunConfig& c) { return std::to_string(c.generative.critic_steps); }});
        k.push_back({"generative.wgan_clip",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.generative.wgan_clip = to_double("generative.wgan_clip", v);
                     },
                     [](const RunConfig& c) { return show(c.generative.wgan_clip); }});
        k.push_back({"generative.noise_dim",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.generative.noise_dim = to_u64("generative.noise_dim", v);
                     },
                     [](const RunConfig& c) { return std::to_string(c.generative.noise_dim); }});

        k.push_back({"gansim.scenario",
                     [](RunConfig& c, const std::string& v, const fs::path& b) { c.scenario = resolve(b, v); },
                     [](const RunConfig& c) { return c.scenario.string(); }});
        k.push_back({"gansim.policies",
                     [](RunConfig& c, const std::string& v, const fs::path&) {
                         c.policies = split_list(v);
                         for (const auto& p : c.policies) {
                             try {
                                 gan::BalancePolicy::parse(p);
                             } catch (const std::invalid_argument& e) {
                                 throw ConfigError(e.what());
                             }
                         }
                     },
                     [](const RunConfig& c) {
                         return join<std::string>(c.policies, [](const std::string& s) { return s; });
                     }});
        k.push_back({"gansim.k", [](RunConfig& c, const std::string& v, const fs::path&) { c.lead_k = to_u64("gansim.k", v); },
                     [](const RunConfig& c) { return std::to_string(c.lead_k); }});
        k.push_back({"gansim.l", [](RunConfig& c, const std::string& v, const fs::path&) { c.lead_l = to_u64("gansim.l", v); },
                     [](const RunConfig& c) { return std::to_string(c.lead_l); }});

        k.push_back({"micalc.pmf", [](RunConfig& c, const std::string& v, const fs::path& b) { c.pmf = resolve(b, v); },
                     [](const RunConfig& c) { return c.pmf.string(); }});
        auto sel = [&](const char* name, std::vector<std::size_t> RunConfig::*f) {
            const std::string key = name;
            k.push_back({key, [f, key](RunConfig& c, const std::string& v, const fs::path&) { c.*f = to_indices(key, v); },
                         [f](const RunConfig& c) { return show_indices(c.*f); }});
        };
        sel("micalc.a", &RunConfig::mi_a);
        sel("micalc.b", &RunConfig::mi_b);
        sel("micalc.given", &RunConfig::mi_given);
        return k;
    }();
    return keys;
}

const Key* find_key(const std::string& name) {
    for (const auto& k : key_table())
        if (k.name == name) return &k;
    return nullptr;
}

void check_unit(const char* what, const std::vector<double>& xs) {
    if (xs.empty()) throw ConfigError(std::string(what) + ": grid is empty");
    for (double x : xs)
        if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(std::string(what) + ": values must lie in [0,1]");
}

}  // namespace

// ---- config -------------------------------------------------------------------------

RunConfig::RunConfig() {
    probe.epochs = 10;
    // adversarial pairs train with beta1 = 0.5; at 0.9 D wins within the first epoch and G collapses
    generative.optimizer.beta1 = 0.5;
}

void RunConfig::validate() const {
    if (schema != kSchemaVersion) throw ConfigError("unsupported schema " + std::to_string(schema));
    if (data.source != "synth" && data.source != "idx") throw ConfigError("data.source must be synth or idx");
    if (data.source == "idx" && (data.idx_images.empty() || data.idx_labels.empty())) {
        throw ConfigError("data.source = idx needs data.idx_images and data.idx_labels");
    }
    if (data.num_classes < 2) throw ConfigError("data.num_classes must be >= 2");
    if (data.image_size == 0 && data.source == "synth") throw ConfigError("data.image_size must be >= 1");
    if (data.per_class < 2) throw ConfigError("data.per_class must be >= 2");
    if (data.train_size == 0 || data.test_size == 0) throw ConfigError("data sizes must be >= 1");
    check_unit("surface.rho_l", surface_rho_l);
    check_unit("surface.rho_r", surface_rho_r);
    check_unit("sweep.rho_l", sweep_rho_l);
    check_unit("sweep.rho_r", sweep_rho_r);
    if (sweep_replicates == 0) throw ConfigError("sweep.replicates must be >= 1");
    for (const auto* t : {&phase1, &probe, &generative}) {
        try {
            t->validate();
        } catch (const train::ConfigError& e) {
            throw ConfigError(e.what());
        }
    }
}

void set_key(RunConfig& c, const std::string& name, const std::string& value, const fs::path& base_dir) {
    const Key* k = find_key(name);
    if (k == nullptr) throw ConfigError("unknown config key '" + name + "'");
    try {
        k->set(c, trim(value), base_dir);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(name + ": " + e.what());
    }
}

RunConfig parse_config(std::istream& in, const fs::path& base_dir) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig c;
    auto apply = [&](const std::string& name, const std::string& value) { set_key(c, name, value, base_dir); };
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            apply(name, node.data());
            continue;
        }
        for (const auto& [key, leaf] : node) {
            if (!leaf.empty()) throw ConfigError("nested value under '" + name + "." + key + "'");
            apply(name + "." + key, leaf.data());
        }
    }
    c.validate();
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    return parse_config(in, path.parent_path());
}

std::string render_config(const RunConfig& c) {
    std::ostringstream out;
    std::string section;
    for (const auto& k : key_table()) {
        const auto dot = k.name.find('.');
        const std::string sec = dot == std::string::npos ? "" : k.name.substr(0, dot);
        const std::string key = dot == std::string::npos ? k.name : k.name.substr(dot + 1);
        if (sec != section) {
            out << "\n[" << sec << "]\n";
            section = sec;
        }
        out << key << " = " << k.get(c) << "\n";
    }
    return out.str();
}

// ---- statistics -------------------------------------------------------------------

double pearson_r(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson_r: length mismatch");
    if (xs.size() < 2) throw std::invalid_argument("pearson_r: need at least two points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw std::invalid_argument("pearson_r: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---- experiments --------------------------------------------------------------------

DigitBank make_bank(const DataConfig& d) {
    if (d.source == "idx") return load_idx(d.idx_images, d.idx_labels, IdxOptions{d.num_classes, d.image_size});
    return synth_bank(d.num_classes, d.per_class, d.image_size, d.bank_seed);
}

namespace {

std::uint64_t coord(double rho) { return static_cast<std::uint64_t>(std::llround(rho * 1e6)); }

// Clean pairs with independent labels; only x_r features can predict y_r here.
std::pair<Dataset, Dataset> probe_sets(const RunConfig& c, const DigitBank& bank, std::size_t replicate) {
    const CorruptionParams clean{1.0, 0.0, c.data.num_classes};
    return {gen_dataset(bank, clean, c.data.train_size, derive_seed(c.seed, {0x9b, replicate, 0}), Split::Train),
            gen_dataset(bank, clean, c.data.test_size, derive_seed(c.seed, {0x9b, replicate, 1}), Split::Test)};
}

train::TrainConfig seeded(train::TrainConfig t, std::uint64_t seed) {
    t.seed = seed;
    return t;
}

double probe_accuracy(const RunConfig& c, const train::FeatureExtractor& ex, const std::pair<Dataset, Dataset>& sets,
                      std::uint64_t seed) {
    return train::train_probe(ex, sets.first, sets.second, train::Target::Right, seeded(c.probe, seed), c.probe_scaling)
        .test_accuracy;
}

std::string failure(const std::exception& e) {
    std::string s = std::string("failed: ") + e.what();
    for (char& ch : s)
        if (ch == ',' || ch == '\n') ch = ';';
    return s;
}

}  // namespace

SweepCell run_sweep_cell(const RunConfig& c, const DigitBank& bank, double rho_l, double rho_r, std::size_t replicate) {
    SweepCell cell;
    cell.rho_l = rho_l;
    cell.rho_r = rho_r;
    cell.replicate = replicate;
    cell.seed = derive_seed(c.seed, {0x5e, coord(rho_l), coord(rho_r), replicate});
    const CorruptionParams p{rho_l, rho_r, c.data.num_classes};
    cell.signal_bits = task_signal(p);
    try {
        const Dataset train = gen_dataset(bank, p, c.data.train_size, derive_seed(cell.seed, {1}), Split::Train);
        nn::ModelGraph model =
            nn::make_twin_mlp(derive_seed(cell.seed, {2}), bank.pixels(), 128, 50, c.data.num_classes);
        train::train_supervised(model, train, seeded(c.phase1, derive_seed(cell.seed, {3})));
        cell.accuracy = probe_accuracy(c, train::FeatureExtractor(model), probe_sets(c, bank, replicate),
                                       derive_seed(cell.seed, {4}));
    } catch (const train::DivergenceError& e) {
        cell.status = failure(e);
    } catch (const nn::NumericError& e) {
        cell.status = failure(e);
    }
    return cell;
}

SweepReport run_sweep(const RunConfig& c) {
    const DigitBank bank = make_bank(c.data);
    SweepReport r;
    for (std::size_t rep = 0; rep < c.sweep_replicates; ++rep)
        for (double rr : c.sweep_rho_r)
            for (double rl : c.sweep_rho_l) r.cells.push_back(run_sweep_cell(c, bank, rl, rr, rep));
    std::vector<double> xs, ys;
    for (const auto& cell : r.cells) {
        if (!cell.accuracy) {
            ++r.excluded;
            continue;
        }
        xs.push_back(cell.signal_bits);
        ys.push_back(*cell.accuracy);
    }
    try {
        r.pearson = pearson_r(xs, ys);
    } catch (const std::invalid_argument&) {
        r.pearson.reset();
    }
    return r;
}

std::vector<Table1Row> run_table1(const RunConfig& c) {
    const DigitBank bank = make_bank(c.data);
    const std::size_t k = c.data.num_classes, px = bank.pixels();
    const CorruptionParams clean{1.0, 0.0, k};
    const Dataset train = gen_dataset(bank, clean, c.data.train_size, derive_seed(c.seed, {0x7a, 0}), Split::Train);
    const nn::Tensor inputs = train::dataset_inputs(train);
    const auto sets = probe_sets(c, bank, 0);

    std::vector<Table1Row> rows;
    auto run = [&](const char* name, std::uint64_t init_seed, auto&& make_untrained, auto&& train_it) {
        Table1Row row;
        row.model = name;
        row.seed = init_seed;
        const std::uint64_t probe_seed = derive_seed(c.seed, {0x7b, rows.size()});
        try {
            row.untrained = probe_accuracy(c, train::FeatureExtractor(make_untrained()), sets, probe_seed);
            row.trained = probe_accuracy(c, train_it(), sets, probe_seed);
        } catch (const train::DivergenceError& e) {
            row.status = failure(e);
        } catch (const nn::NumericError& e) {
            row.status = failure(e);
        }
        rows.push_back(std::move(row));
    };

    const auto s_sup = derive_seed(c.seed, {0x7c, 0});
    run("supervised", s_sup, [&] { return nn::make_twin_mlp(s_sup, px, 128, 50, k); },
        [&] {
            auto m = nn::make_twin_mlp(s_sup, px, 128, 50, k);
            train::train_supervised(m, train, seeded(c.phase1, derive_seed(s_sup, {1})));
            return train::FeatureExtractor(m);
        });

    const auto s_ae = derive_seed(c.seed, {0x7c, 1});
    run("autoencoder", s_ae, [&] { return nn::make_autoencoder(s_ae, 2 * px); },
        [&] {
            return train::train_autoencoder(nn::make_autoencoder(s_ae, 2 * px), inputs,
                                            train::dataset_inputs(sets.second),
                                            seeded(c.generative, derive_seed(s_ae, {1})))
                .extractor;
        });

    const auto s_gan = derive_seed(c.seed, {0x7c, 2});
    run("gan", s_gan, [&] { return nn::make_discriminator(s_gan, 2 * px); },
        [&] {
            auto cfg = seeded(c.generative, derive_seed(s_gan, {1}));
            return train::train_gan(inputs, nn::make_generator(derive_seed(s_gan, {2}), cfg.noise_dim, 128, 2 * px),
                                    nn::make_discriminator(s_gan, 2 * px), cfg)
                .extractor;
        });

    const auto s_wgan = derive_seed(c.seed, {0x7c, 3});
    run("wgan", s_wgan, [&] { return nn::make_discriminator(s_wgan, 2 * px, 128, 100, nn::Topology::Critic); },
        [&] {
            auto cfg = seeded(c.generative, derive_seed(s_wgan, {1}));
            return train::train_wgan(inputs, nn::make_generator(derive_seed(s_wgan, {2}), cfg.noise_dim, 128, 2 * px),
                                     nn::make_discriminator(s_wgan, 2 * px, 128, 100, nn::Topology::Critic), cfg)
                .extractor;
        });
    return rows;
}

namespace {

std::string opt_acc(const std::optional<double>& v) { return v ? fmt("%.6f", *v) : ""; }

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepReport& r) {
    out << "rho_l,rho_r,signal_bits,accuracy,seed,status\n";
    for (const auto& c : r.cells) {
        out << fmt("%.6g", c.rho_l) << ',' << fmt("%.6g", c.rho_r) << ',' << fmt("%.9f", c.signal_bits) << ','
            << opt_acc(c.accuracy) << ',' << c.seed << ',' << c.status << '\n';
    }
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Row>& rows) {
    out << "model,trained_acc,untrained_acc,seed\n";
    for (const auto& r : rows) out << r.model << ',' << opt_acc(r.trained) << ',' << opt_acc(r.untrained) << ',' << r.seed << '\n';
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

// ---- commands -----------------------------------------------------------------------

namespace {

CommandResult finish(const RunConfig& c, int code, std::string summary) {
    write_file_atomic(c.out_dir / "config.ini", render_config(c));
    write_file_atomic(c.out_dir / "summary.txt", summary);
    return {code, std::move(summary)};
}

}  // namespace

CommandResult cmd_surface(const RunConfig& c) {
    const auto s = signal_surface(c.surface_rho_l, c.surface_rho_r, c.data.num_classes);
    std::ostringstream csv;
    write_surface_csv(csv, s);
    write_file_atomic(c.out_dir / "surface.csv", csv.str());

    std::ostringstream sum;
    sum << "signal surface I(Y_l; X_r | X_l), bits\n";
    sum << "grid " << s.rho_l_grid.size() << " x " << s.rho_r_grid.size() << ", " << c.data.num_classes << " classes\n";
    const std::size_t nl = s.rho_l_grid.size() - 1, nr = s.rho_r_grid.size() - 1;
    for (auto [i, j] : {std::pair{std::size_t{0}, std::size_t{0}}, {0, nr}, {nl, 0}, {nl, nr}}) {
        sum << "corner rho_l=" << fmt("%g", s.rho_l_grid[i]) << " rho_r=" << fmt("%g", s.rho_r_grid[j]) << ": "
            << fmt("%.9f", s.values[i][j]) << "\n";
    }
    return finish(c, 0, sum.str());
}

CommandResult cmd_sweep(const RunConfig& c) {
    const SweepReport r = run_sweep(c);
    std::ostringstream csv;
    write_sweep_csv(csv, r);
    write_file_atomic(c.out_dir / "sweep.csv", csv.str());

    std::ostringstream sum;
    sum << "probe sweep: " << r.cells.size() << " cells, " << r.excluded << " failed\n";
    sum << "pearson_r = " << (r.pearson ? fmt("%.6f", *r.pearson) : std::string("undefined")) << " (over "
        << r.cells.size() - r.excluded << " cells, " << r.excluded << " excluded)\n\n";
    sum << "mean y_r probe accuracy; rows rho_r, columns rho_l\n" << "rho_r\\rho_l";
    for (double rl : c.sweep_rho_l) sum << fmt("  %6g", rl);
    sum << "\n";
    for (double rr : c.sweep_rho_r) {
        sum << fmt("%11g", rr);
        for (double rl : c.sweep_rho_l) {
            double acc = 0.0;
            std::size_t n = 0;
            for (const auto& cell : r.cells)
                if (cell.rho_l == rl && cell.rho_r == rr && cell.accuracy) {
                    acc += *cell.accuracy;
                    ++n;
                }
            sum << (n ? fmt("  %6.4f", acc / static_cast<double>(n)) : std::string("      --"));
        }
        sum << "\n";
    }
    return finish(c, r.excluded > 0 ? 2 : 0, sum.str());
}

CommandResult cmd_table1(const RunConfig& c) {
    const auto rows = run_table1(c);
    std::ostringstream csv;
    write_table1_csv(csv, rows);
    write_file_atomic(c.out_dir / "table1.csv", csv.str());

    std::ostringstream sum;
    sum << "y_r probe accuracy at rho_l=1, rho_r=0; untrained weights in brackets\n\n";
    char head[32];
    sum << "          ";
    for (const auto& r : rows) {
        std::snprintf(head, sizeof head, "%14s", r.model.c_str());
        sum << head;
    }
    sum << "\n" << "trained   ";
    for (const auto& r : rows) sum << (r.trained ? fmt("%14.4f", *r.trained) : std::string("        failed"));
    sum << "\n" << "untrained ";
    for (const auto& r : rows) sum << (r.untrained ? fmt("     (%7.4f)", *r.untrained) : std::string("        failed"));
    sum << "\n";
    bool failed = false;
    for (const auto& r : rows)
        if (r.status != "ok") {
            sum << r.model << ": " << r.status << "\n";
            failed = true;
        }
    return finish(c, failed ? 2 : 0, sum.str());
}

CommandResult cmd_gansim(const RunConfig& c) {
    if (c.scenario.empty()) throw ConfigError("gansim needs gansim.scenario");
    std::ifstream in(c.scenario);
    if (!in) throw ConfigError("cannot read scenario " + c.scenario.string());
    gan::GanScenario s;
    try {
        s = gan::read_scenario(in);
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(c.scenario.string() + ": " + e.what());
    }
    std::vector<gan::BalancePolicy> policies;
    for (const auto& p : c.policies) policies.push_back(gan::BalancePolicy::parse(p));

    std::ostringstream sum;
    bool ok = true;
    auto check = [&](const std::string& name, bool pass, const std::string& detail) {
        sum << (pass ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        ok &= pass;
    };
    const double tol = gan::kIdentityTolerance;
    const JointPMF joint = gan::scenario_joint(s);
    const std::size_t n = s.feature_count();
    sum << "scenario " << c.scenario.filename().string() << ": " << n << " features, D knows " << s.learned_by_d
        << ", G matches " << s.learned_by_g << "\n\n";

    // motivation at every confused prefix
    for (std::size_t k = 1; k <= n; ++k) {
        if (!gan::confusion_check(s, k - 1).confused) break;
        const auto m = gan::discriminator_motivation(s, k);
        const double chain = 1.0 - gan::label_entropy_given_prefix(s, k);
        check("motivation f_" + std::to_string(k),
              std::abs(m.exact - chain) <= tol && m.exact >= m.lower_bound - tol,
              "exact " + fmt("%.12f", m.exact) + " = 1 - H(y|f_1..f_k) " + fmt("%.12f", chain) + " >= 1 - H(y|f_k) " +
                  fmt("%.12f", m.lower_bound));
    }
    const auto conf = gan::confusion_check(s, s.learned_by_d);
    sum << "confusion on the features D knows: " << (conf.confused ? "yes" : "no") << " (H = "
        << fmt("%.12f", conf.entropy_bits) << " bits)\n";

    // lead identities
    std::size_t k = c.lead_k, l = c.lead_l;
    if (k == 0) {
        k = s.learned_by_g + 1;
        l = s.learned_by_d >= k ? s.learned_by_d - k + 1 : 0;
    }
    if (c.lead_k != 0 && (l == 0 || k + l > n)) {
        check("lead identities", false,
              "precondition violated: k=" + std::to_string(k) + " l=" + std::to_string(l) + " needs f_k+l within " +
                  std::to_string(n) + " features");
    } else if (l > 0 && k + l <= n) {
        try {
            const auto lm = gan::lead_motivation(s, k, l);
            check("lead motivation k=" + std::to_string(k) + " l=" + std::to_string(l),
                  std::abs(lm.conditional - lm.lead_form) <= tol,
                  "I(y; f_k+l | f_1..f_k+l-1) " + fmt("%.12f", lm.conditional) + " vs lead form " +
                      fmt("%.12f", lm.lead_form));
            const auto gi = gan::generator_incentive(s, k, l);
            check("generator incentive", gi.incentive < gi.bound + tol,
                  fmt("%.12f", gi.incentive) + " < I(y; f_k..f_k+l-1) " + fmt("%.12f", gi.bound));
            double sum_m = 0.0;
            VarSelector prefix;
            std::vector<std::size_t> block;
            for (std::size_t j = 1; j < k; ++j) prefix = prefix.join(VarSelector{j});
            for (std::size_t j = k; j < k + l; ++j) {
                sum_m += conditional_mutual_information(joint, {0}, {j}, prefix);
                prefix = prefix.join(VarSelector{j});
                block.push_back(j);
            }
            const double block_mi = mutual_information(joint, {0}, VarSelector(block));
            check("motivation sum", std::abs(sum_m - block_mi) <= tol,
                  "sum " + fmt("%.12f", sum_m) + " = I(y; f_k..f_k+l-1) " + fmt("%.12f", block_mi));
        } catch (const gan::PreconditionError& e) {
            check("lead identities", false, std::string("precondition violated: ") + e.what());
        } catch (const gan::IdentityViolation& e) {
            check("lead identities", false, e.what());
        }
    }

    gan::BalanceTrace trace;
    try {
        trace = gan::simulate_balancing(s, policies);
    } catch (const gan::PreconditionError& e) {
        check("balancing", false, std::string("precondition violated: ") + e.what());
    }
    std::ostringstream csv;
    gan::write_trace_csv(csv, trace);
    write_file_atomic(c.out_dir / "gansim_trace.csv", csv.str());
    const double v_end = trace.steps.empty() ? trace.initial_value_nats : trace.steps.back().value_nats;
    sum << "balancing " << c.policies.size() << " policies, " << trace.steps.size() << " steps, final V = "
        << fmt("%.12f", v_end) << " nats\n";
    if (!policies.empty() && policies.back().kind == gan::PolicyKind::GCatchup) {
        check("g-catchup ends at confusion", std::abs(v_end - std::log(4.0)) <= tol,
              "V " + fmt("%.12f", v_end) + " vs log 4 " + fmt("%.12f", std::log(4.0)));
    }
    sum << (ok ? "all checks passed\n" : "some checks failed\n");
    return finish(c, ok ? 0 : 2, sum.str());
}

CommandResult cmd_micalc(const RunConfig& c) {
    if (c.pmf.empty()) throw ConfigError("micalc needs micalc.pmf");
    std::ifstream in(c.pmf);
    if (!in) throw ConfigError("cannot read pmf " + c.pmf.string());
    const JointPMF p = [&] {
        try {
            return read_pmf(in);
        } catch (const PmfError& e) {
            throw ConfigError(c.pmf.string() + ": " + e.what());
        }
    }();
    std::ostringstream sum;
    sum << "joint over " << p.arity() << " variables, " << p.cell_count() << " cells\n";
    for (std::size_t i = 0; i < p.arity(); ++i)
        sum << "H(" << p.variables()[i].name << ") = " << fmt("%.12f", entropy(p, {i})) << " bits\n";
    sum << "H(all) = " << fmt("%.12f", entropy(p, VarSelector::range(0, p.arity()))) << " bits\n";
    if (!c.mi_a.empty() || !c.mi_b.empty()) {
        try {
            const VarSelector a(c.mi_a), b(c.mi_b), g(c.mi_given);
            const double v = conditional_mutual_information(p, a, b, g);
            sum << "I(" << show_indices(c.mi_a) << "; " << show_indices(c.mi_b) << " | " << show_indices(c.mi_given)
                << ") = " << fmt("%.12f", v) << " bits\n";
        } catch (const PmfError& e) {
            throw ConfigError(std::string("micalc selectors: ") + e.what());
        }
    }
    return finish(c, 0, sum.str());
}

}  // namespace featcomp::cli
