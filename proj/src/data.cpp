#include "featcomp/data.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>

#include "featcomp/binio.hpp"

namespace featcomp {

DigitBank::DigitBank(std::size_t height, std::size_t width, std::vector<std::vector<Image>> by_class)
    : height_(height), width_(width), by_class_(std::move(by_class)) {
    if (height_ == 0 || width_ == 0) throw DataError("digit bank needs a non-empty image shape");
    if (by_class_.size() < 2) throw DataError("digit bank needs at least two classes");
    const std::size_t px = pixels();
    mean_.assign(px, 0.0);
    var_.assign(px, 0.0);
    std::size_t count = 0;
    for (std::size_t c = 0; c < by_class_.size(); ++c) {
        if (by_class_[c].empty()) throw DataError("class " + std::to_string(c) + " has no images");
        for (const auto& img : by_class_[c]) {
            if (img.size() != px) throw DataError("image shape mismatch in class " + std::to_string(c));
            for (std::size_t i = 0; i < px; ++i) {
                if (!std::isfinite(img[i])) throw DataError("non-finite pixel in class " + std::to_string(c));
                mean_[i] += img[i];
            }
            ++count;
        }
    }
    for (auto& m : mean_) m /= static_cast<double>(count);
    for (const auto& cls : by_class_) {
        for (const auto& img : cls) {
            for (std::size_t i = 0; i < px; ++i) {
                const double d = img[i] - mean_[i];
                var_[i] += d * d;
            }
        }
    }
    for (auto& v : var_) v /= static_cast<double>(count);
}

std::size_t DigitBank::total_images() const noexcept {
    std::size_t n = 0;
    for (const auto& c : by_class_) n += c.size();
    return n;
}

// ---- IDX ----------------------------------------------------------------

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t off, const std::filesystem::path& path) {
    if (off + 4 > b.size()) throw DataError("truncated IDX header in '" + path.string() + "'");
    return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) | (std::uint32_t{b[off + 2]} << 8) |
           std::uint32_t{b[off + 3]};
}

}  // namespace

Image downsample(const Image& src, std::size_t side, std::size_t out_side) {
    if (out_side == 0 || side % out_side != 0) throw DataError("downsample factor must be an integer");
    const std::size_t f = side / out_side;
    Image out(out_side * out_side, 0.0f);
    for (std::size_t r = 0; r < out_side; ++r) {
        for (std::size_t c = 0; c < out_side; ++c) {
            float sum = 0.0f;
            for (std::size_t dr = 0; dr < f; ++dr) {
                for (std::size_t dc = 0; dc < f; ++dc) sum += src[(r * f + dr) * side + c * f + dc];
            }
            out[r * out_side + c] = sum / static_cast<float>(f * f);
        }
    }
    return out;
}

DigitBank load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
                   const IdxOptions& options) {
    const auto img = read_file(images_path);
    const auto lab = read_file(labels_path);
    if (be32(img, 0, images_path) != 2051) throw DataError("bad IDX image magic in '" + images_path.string() + "'");
    if (be32(lab, 0, labels_path) != 2049) throw DataError("bad IDX label magic in '" + labels_path.string() + "'");
    const std::size_t n = be32(img, 4, images_path);
    const std::size_t rows = be32(img, 8, images_path);
    const std::size_t cols = be32(img, 12, images_path);
    const std::size_t n_labels = be32(lab, 4, labels_path);
    if (n != n_labels) {
        throw DataError("count mismatch: " + std::to_string(n) + " images vs " + std::to_string(n_labels) + " labels");
    }
    if (rows == 0 || cols == 0) throw DataError("IDX images have an empty shape");
    if (img.size() < 16 + n * rows * cols) throw DataError("truncated IDX image payload");
    if (lab.size() < 8 + n) throw DataError("truncated IDX label payload");

    std::size_t side = rows;
    std::size_t out_side = options.image_size == 0 ? rows : options.image_size;
    const bool resize = out_side != rows;
    if (resize && rows != cols) throw DataError("only square IDX images can be resized");

    std::vector<std::vector<Image>> by_class(options.num_classes);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t label = lab[8 + i];
        if (label >= options.num_classes) throw DataError("label " + std::to_string(label) + " out of range");
        Image px(rows * cols);
        for (std::size_t p = 0; p < px.size(); ++p) px[p] = static_cast<float>(img[16 + i * rows * cols + p]) / 255.0f;
        by_class[label].push_back(resize ? downsample(px, side, out_side) : std::move(px));
    }
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].empty()) throw DataError("IDX files contain no images of class " + std::to_string(c));
    }
    return resize ? DigitBank(out_side, out_side, std::move(by_class)) : DigitBank(rows, cols, std::move(by_class));
}

// ---- synthetic glyphs ---------------------------------------------------

namespace {

struct Segment {
    double x0, y0, x1, y1;
};

// Seven-segment layout in unit coordinates, plus two diagonals and a center bar.
constexpr std::array<Segment, 10> kStrokes{{
    {0.30, 0.18, 0.70, 0.18},  // 0 top
    {0.70, 0.18, 0.70, 0.50},  // 1 upper right
    {0.70, 0.50, 0.70, 0.82},  // 2 lower right
    {0.30, 0.82, 0.70, 0.82},  // 3 bottom
    {0.30, 0.50, 0.30, 0.82},  // 4 lower left
    {0.30, 0.18, 0.30, 0.50},  // 5 upper left
    {0.30, 0.50, 0.70, 0.50},  // 6 middle
    {0.30, 0.82, 0.70, 0.18},  // 7 rising diagonal
    {0.30, 0.18, 0.70, 0.82},  // 8 falling diagonal
    {0.50, 0.18, 0.50, 0.82},  // 9 center vertical
}};

// Bit i set = stroke i drawn.
constexpr std::array<unsigned, 10> kDigitMasks{
    0b0000111111,  // 0
    0b1000000000,  // 1 (center bar)
    0b0001011101,  // 2
    0b0001001111,  // 3
    0b0001100110,  // 4
    0b0001101101,  // 5
    0b0001111101,  // 6
    0b0010000001,  // 7 (top + diagonal)
    0b0001111111,  // 8
    0b0001101111,  // 9
};

unsigned class_mask(std::size_t cls) {
    if (cls < kDigitMasks.size()) return kDigitMasks[cls];
    // beyond ten classes: deterministic 3-5 stroke patterns
    Rng rng(mix64(0xd1b54a32d192ed03ULL + cls));
    unsigned mask = 0;
    std::uniform_int_distribution<std::size_t> pick(0, kStrokes.size() - 1);
    while (std::popcount(mask) < 3 + static_cast<int>(cls % 3)) mask |= 1u << pick(rng);
    return mask;
}

double segment_distance(double px, double py, const Segment& s) {
    const double dx = s.x1 - s.x0, dy = s.y1 - s.y0;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((px - s.x0) * dx + (py - s.y0) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double ex = s.x0 + t * dx - px, ey = s.y0 + t * dy - py;
    return std::sqrt(ex * ex + ey * ey);
}

Image render_glyph(std::size_t cls, std::size_t side, const GlyphStyle& st, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> jitter(0.0, st.endpoint);
    std::normal_distribution<double> pixel_noise(0.0, st.pixel_noise);

    const double shift_x = st.shift * u(rng), shift_y = st.shift * u(rng);
    const double angle = st.rotation * u(rng);
    const double scale = 1.0 + st.scale * u(rng);
    const double thickness = (0.9 + 0.35 * (u(rng) + 1.0)) / static_cast<double>(side);
    const double ink = 0.75 + 0.125 * (u(rng) + 1.0);
    const double ca = std::cos(angle), sa = std::sin(angle);

    auto place = [&](double x, double y) {
        x = (x - 0.5) * scale;
        y = (y - 0.5) * scale;
        return std::pair{0.5 + ca * x - sa * y + shift_x, 0.5 + sa * x + ca * y + shift_y};
    };

    std::vector<Segment> strokes;
    const unsigned mask = class_mask(cls);
    for (std::size_t i = 0; i < kStrokes.size(); ++i) {
        if (!(mask & (1u << i))) continue;
        auto [x0, y0] = place(kStrokes[i].x0 + jitter(rng), kStrokes[i].y0 + jitter(rng));
        auto [x1, y1] = place(kStrokes[i].x1 + jitter(rng), kStrokes[i].y1 + jitter(rng));
        strokes.push_back({x0, y0, x1, y1});
    }

    Image img(side * side);
    const double pixel = 1.0 / static_cast<double>(side);
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const double px = (static_cast<double>(c) + 0.5) * pixel;
            const double py = (static_cast<double>(r) + 0.5) * pixel;
            double d = 1e9;
            for (const auto& s : strokes) d = std::min(d, segment_distance(px, py, s));
            // soft edge one pixel wide around the stroke core
            double v = ink * std::clamp(1.0 - (d - thickness * 0.5) / pixel, 0.0, 1.0);
            v += pixel_noise(rng);
            img[r * side + c] = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
    }
    return img;
}

}  // namespace

void GlyphStyle::validate() const {
    for (double v : {shift, rotation, scale, endpoint, pixel_noise}) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DataError("glyph style values must be finite and >= 0");
    }
    if (scale >= 1.0) throw DataError("glyph scale jitter must be < 1");
}

DigitBank synth_bank(std::size_t num_classes, std::size_t per_class, std::size_t image_size, std::uint64_t seed,
                     const GlyphStyle& style) {
    style.validate();
    if (num_classes < 2) throw DataError("synth_bank needs at least two classes");
    if (per_class < 1) throw DataError("synth_bank needs at least one image per class");
    if (image_size < 4) throw DataError("synth_bank image size must be >= 4");
    std::vector<std::vector<Image>> by_class(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        Rng rng(derive_seed(seed, {0x5157, c}));
        for (std::size_t i = 0; i < per_class; ++i) by_class[c].push_back(render_glyph(c, image_size, style, rng));
    }
    return DigitBank(image_size, image_size, std::move(by_class));
}

// ---- dataset generation ---------------------------------------------------

const char* split_name(Split s) { return s == Split::Train ? "train" : "test"; }

std::pair<std::size_t, std::size_t> split_range(std::size_t class_size, Split split) {
    if (class_size < 2) return {0, class_size};
    auto cut = static_cast<std::size_t>(std::floor(kTrainImageFraction * static_cast<double>(class_size)));
    cut = std::clamp<std::size_t>(cut, 1, class_size - 1);
    return split == Split::Train ? std::pair{std::size_t{0}, cut} : std::pair{cut, class_size};
}

Image sample_noise_image(const DigitBank& bank, Rng& rng, bool clamp) {
    std::normal_distribution<double> z(0.0, 1.0);
    const auto& mean = bank.pixel_mean();
    const auto& var = bank.pixel_variance();
    Image img(bank.pixels());
    for (std::size_t i = 0; i < img.size(); ++i) {
        double v = mean[i] + std::sqrt(var[i]) * z(rng);
        if (clamp) v = std::clamp(v, 0.0, 1.0);
        img[i] = static_cast<float>(v);
    }
    return img;
}

Dataset gen_dataset(const DigitBank& bank, const CorruptionParams& params, std::size_t n, std::uint64_t seed,
                    Split split) {
    params.validate();
    if (n == 0) throw DataError("dataset size must be >= 1");
    if (bank.num_classes() < params.num_classes) {
        throw DataError("bank has " + std::to_string(bank.num_classes()) + " classes, task needs " +
                        std::to_string(params.num_classes));
    }
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(split)}));
    std::uniform_int_distribution<std::size_t> label(0, params.num_classes - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw_image = [&](std::size_t cls) -> const Image& {
        const auto& imgs = bank.images(cls);
        auto [first, last] = split_range(imgs.size(), split);
        std::uniform_int_distribution<std::size_t> pick(first, last - 1);
        return imgs[pick(rng)];
    };

    Dataset d;
    d.params = params;
    d.seed = seed;
    d.split = split;
    d.height = bank.height();
    d.width = bank.width();
    d.examples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Example e;
        e.y_l = static_cast<std::uint16_t>(label(rng));
        e.x_l = draw_image(e.y_l);
        if (unit(rng) >= params.rho_l) {
            e.x_l = sample_noise_image(bank, rng);
            e.corrupted_left = true;
        }
        e.y_r = unit(rng) < params.rho_r ? e.y_l : static_cast<std::uint16_t>(label(rng));
        e.x_r = draw_image(e.y_r);
        d.examples.push_back(std::move(e));
    }
    return d;
}

// ---- serialization --------------------------------------------------------

namespace {
constexpr char kDatasetMagic[4] = {'F', 'C', 'L', 'D'};
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
    binio::Writer w;
    w.bytes(kDatasetMagic, 4);
    w.le(kDatasetVersion);
    w.f64(d.params.rho_l);
    w.f64(d.params.rho_r);
    w.le(static_cast<std::uint32_t>(d.params.num_classes));
    w.le(d.seed);
    w.le(static_cast<std::uint8_t>(d.split));
    w.le(static_cast<std::uint32_t>(d.height));
    w.le(static_cast<std::uint32_t>(d.width));
    w.le(static_cast<std::uint64_t>(d.examples.size()));
    for (const auto& e : d.examples) {
        if (e.x_l.size() != d.pixels() || e.x_r.size() != d.pixels()) throw DataError("example shape mismatch");
        for (float v : e.x_l) w.f32(v);
        for (float v : e.x_r) w.f32(v);
        w.le(e.y_l);
        w.le(e.y_r);
        w.le(static_cast<std::uint8_t>(e.corrupted_left ? 1 : 0));
    }
    w.commit(path);
}

Dataset load_dataset(const std::filesystem::path& path) {
    binio::Reader r(path);
    char magic[4];
    r.bytes(magic, 4);
    if (!std::equal(magic, magic + 4, kDatasetMagic)) throw binio::FormatError("not a dataset file (bad magic)");
    const auto version = r.le<std::uint16_t>();
    if (version != kDatasetVersion) {
        throw binio::FormatError("dataset version " + std::to_string(version) + " unsupported");
    }
    Dataset d;
    d.params.rho_l = r.f64();
    d.params.rho_r = r.f64();
    d.params.num_classes = r.le<std::uint32_t>();
    d.seed = r.le<std::uint64_t>();
    const auto split = r.le<std::uint8_t>();
    if (split > 1) throw binio::FormatError("bad split tag");
    d.split = static_cast<Split>(split);
    d.height = r.le<std::uint32_t>();
    d.width = r.le<std::uint32_t>();
    const auto count = r.le<std::uint64_t>();
    const std::size_t px = d.pixels();
    const std::size_t per_example = 8 * px + 5;
    if (per_example == 0 || count > r.remaining() / per_example) throw binio::FormatError("truncated dataset payload");
    d.examples.resize(count);
    for (auto& e : d.examples) {
        e.x_l.resize(px);
        e.x_r.resize(px);
        for (auto& v : e.x_l) v = r.f32();
        for (auto& v : e.x_r) v = r.f32();
        e.y_l = r.le<std::uint16_t>();
        e.y_r = r.le<std::uint16_t>();
        e.corrupted_left = r.le<std::uint8_t>() != 0;
    }
    r.expect_end();
    d.params.validate();
    return d;
}

void write_manifest(std::ostream& out, const Dataset& d) {
    out << "index,y_l,y_r,corrupted_left\n";
    for (std::size_t i = 0; i < d.examples.size(); ++i) {
        const auto& e = d.examples[i];
        out << i << ',' << e.y_l << ',' << e.y_r << ',' << (e.corrupted_left ? 1 : 0) << '\n';
    }
}

}  // namespace featcomp
