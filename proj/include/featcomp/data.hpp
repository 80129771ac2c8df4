#pragma once
// Two-digit composite datasets: digit sourcing, label coupling and left-digit corruption.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "featcomp/competition.hpp"
#include "featcomp/rng.hpp"

namespace featcomp {

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Image = std::vector<float>;

/// Per-class grayscale images in [0,1] plus per-pixel statistics over the whole bank.
class DigitBank {
public:
    DigitBank(std::size_t height, std::size_t width, std::vector<std::vector<Image>> by_class);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t pixels() const noexcept { return height_ * width_; }
    std::size_t num_classes() const noexcept { return by_class_.size(); }
    std::size_t total_images() const noexcept;

    const std::vector<Image>& images(std::size_t cls) const { return by_class_.at(cls); }
    const std::vector<double>& pixel_mean() const noexcept { return mean_; }
    const std::vector<double>& pixel_variance() const noexcept { return var_; }

private:
    std::size_t height_;
    std::size_t width_;
    std::vector<std::vector<Image>> by_class_;
    std::vector<double> mean_;
    std::vector<double> var_;
};

struct IdxOptions {
    std::size_t num_classes = 10;
    /// Output side length; 28x28 sources are box-averaged down to it. 0 keeps native size.
    std::size_t image_size = 14;
};

/// Reads big-endian IDX3 images (magic 2051) and IDX1 labels (magic 2049).
DigitBank load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
                   const IdxOptions& options = {});

/// Box-average downsample of a square image by an integer factor.
Image downsample(const Image& src, std::size_t side, std::size_t out_side);

/// Per-image jitter for synthetic glyphs, in unit image coordinates.
struct GlyphStyle {
    double shift = 0.10;        // max translation
    double rotation = 0.18;     // max rotation, radians
    double scale = 0.12;        // max relative scale change
    double endpoint = 0.035;    // stroke endpoint noise (std)
    double pixel_noise = 0.06;  // additive pixel noise (std)

    void validate() const;
};

/// Procedural stroke glyphs with seeded per-image jitter.
DigitBank synth_bank(std::size_t num_classes, std::size_t per_class, std::size_t image_size, std::uint64_t seed,
                     const GlyphStyle& style = {});

enum class Split : std::uint8_t { Train = 0, Test = 1 };

const char* split_name(Split s);

struct Example {
    Image x_l;
    Image x_r;
    std::uint16_t y_l = 0;
    std::uint16_t y_r = 0;
    bool corrupted_left = false;

    bool operator==(const Example&) const = default;
};

struct Dataset {
    std::vector<Example> examples;
    CorruptionParams params;
    std::uint64_t seed = 0;
    Split split = Split::Train;
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t size() const noexcept { return examples.size(); }
    std::size_t pixels() const noexcept { return height * width; }

    bool operator==(const Dataset& o) const {
        return examples == o.examples && params.rho_l == o.params.rho_l && params.rho_r == o.params.rho_r &&
               params.num_classes == o.params.num_classes && seed == o.seed && split == o.split &&
               height == o.height && width == o.width;
    }
};

/// Fraction of each class's images reserved for the train split when the class has >= 2 images.
inline constexpr double kTrainImageFraction = 0.8;

/// Index range [first, last) of a class's images available to `split`.
std::pair<std::size_t, std::size_t> split_range(std::size_t class_size, Split split);

/// One factored-Gaussian noise image from the bank's per-pixel statistics.
Image sample_noise_image(const DigitBank& bank, Rng& rng, bool clamp = true);

Dataset gen_dataset(const DigitBank& bank, const CorruptionParams& params, std::size_t n, std::uint64_t seed,
                    Split split);

inline constexpr std::uint16_t kDatasetVersion = 1;

void save_dataset(const Dataset& d, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

/// `index,y_l,y_r,corrupted_left`
void write_manifest(std::ostream& out, const Dataset& d);

}  // namespace featcomp
