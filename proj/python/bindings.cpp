#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "blurkit/config.hpp"
#include "blurkit/dct.hpp"
#include "blurkit/edas.hpp"
#include "blurkit/eval.hpp"
#include "blurkit/io.hpp"
#include "blurkit/pcnn.hpp"
#include "blurkit/segment.hpp"
#include "blurkit/synth.hpp"

namespace py = pybind11;

namespace {

blurkit::GrayImage to_image(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    const int h = static_cast<int>(a.shape(0));
    const int w = static_cast<int>(a.shape(1));
    std::vector<double> data(a.data(), a.data() + static_cast<std::size_t>(h) * w);
    return blurkit::GrayImage(h, w, std::move(data));
}

py::array_t<double> from_image(const blurkit::GrayImage& img) {
    py::array_t<double> out({img.height(), img.width()});
    std::copy(img.raw().begin(), img.raw().end(), out.mutable_data());
    return out;
}

py::array_t<std::uint8_t> from_mask(const blurkit::SegmentationMask& mask) {
    py::array_t<std::uint8_t> out({mask.height, mask.width});
    std::copy(mask.bits.begin(), mask.bits.end(), out.mutable_data());
    return out;
}

blurkit::SegmentationMask to_mask(
    const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    blurkit::SegmentationMask m;
    m.height = static_cast<int>(a.shape(0));
    m.width = static_cast<int>(a.shape(1));
    m.bits.assign(a.data(), a.data() + static_cast<std::size_t>(m.height) * m.width);
    for (auto& b : m.bits) b = b ? 1 : 0;
    return m;
}

}  // namespace

PYBIND11_MODULE(_blurkit, m) {
    m.doc() = "Defocus-blur region detection toolkit";

    py::register_exception<blurkit::IoError>(m, "IoError");
    py::register_exception<blurkit::FormatError>(m, "FormatError");

    py::class_<blurkit::DcrParams>(m, "DcrParams")
        .def(py::init<>())
        .def_readwrite("band_low", &blurkit::DcrParams::band_low)
        .def_readwrite("band_high", &blurkit::DcrParams::band_high)
        .def_readwrite("weight_low", &blurkit::DcrParams::weight_low)
        .def_readwrite("weight_mid", &blurkit::DcrParams::weight_mid)
        .def_readwrite("weight_high", &blurkit::DcrParams::weight_high)
        .def_readwrite("map_gain", &blurkit::DcrParams::map_gain)
        .def_readwrite("map_base", &blurkit::DcrParams::map_base);

    py::class_<blurkit::RefineParams>(m, "RefineParams")
        .def(py::init<>())
        .def_readwrite("min_window", &blurkit::RefineParams::min_window)
        .def_readwrite("max_window", &blurkit::RefineParams::max_window)
        .def_readwrite("filter_strength", &blurkit::RefineParams::filter_strength)
        .def_readwrite("min_weight", &blurkit::RefineParams::min_weight)
        .def_readwrite("max_weight", &blurkit::RefineParams::max_weight);

    py::class_<blurkit::BlurMapConfig>(m, "BlurMapConfig")
        .def(py::init<>())
        .def_readwrite("patch", &blurkit::BlurMapConfig::patch)
        .def_readwrite("sigma_blur", &blurkit::BlurMapConfig::sigma_blur)
        .def_readwrite("ratio_guard", &blurkit::BlurMapConfig::ratio_guard)
        .def_readwrite("ratio_bands", &blurkit::BlurMapConfig::ratio_bands)
        .def_readwrite("dcr", &blurkit::BlurMapConfig::dcr)
        .def_readwrite("descriptor_order", &blurkit::BlurMapConfig::descriptor_order)
        .def_readwrite("refine", &blurkit::BlurMapConfig::refine)
        .def_readwrite("refine_params", &blurkit::BlurMapConfig::refine_params)
        .def_readwrite("threshold", &blurkit::BlurMapConfig::threshold)
        .def_readwrite("th1", &blurkit::BlurMapConfig::th1)
        .def_readwrite("th2", &blurkit::BlurMapConfig::th2);

    py::class_<blurkit::PcnnParams>(m, "PcnnParams")
        .def(py::init<>())
        .def_readwrite("beta", &blurkit::PcnnParams::beta)
        .def_readwrite("link_gain", &blurkit::PcnnParams::link_gain)
        .def_readwrite("link_decay", &blurkit::PcnnParams::link_decay)
        .def_readwrite("theta_gain", &blurkit::PcnnParams::theta_gain)
        .def_readwrite("theta_decay", &blurkit::PcnnParams::theta_decay)
        .def_readwrite("theta_init", &blurkit::PcnnParams::theta_init)
        .def_readwrite("theta_floor", &blurkit::PcnnParams::theta_floor)
        .def_readwrite("max_iters", &blurkit::PcnnParams::max_iters);

    py::class_<blurkit::PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("dct", &blurkit::PipelineConfig::dct)
        .def_readwrite("pcnn", &blurkit::PipelineConfig::pcnn)
        .def_readwrite("pcnn_adapt", &blurkit::PipelineConfig::pcnn_adapt)
        .def_readwrite("bilateral", &blurkit::PipelineConfig::bilateral)
        .def_readwrite("bilateral_sigma_spatial", &blurkit::PipelineConfig::bilateral_sigma_spatial)
        .def_readwrite("bilateral_sigma_range", &blurkit::PipelineConfig::bilateral_sigma_range)
        .def_readwrite("wave_ratio", &blurkit::PipelineConfig::wave_ratio)
        .def_readwrite("wave_floor", &blurkit::PipelineConfig::wave_floor)
        .def_readwrite("max_waves", &blurkit::PipelineConfig::max_waves)
        .def_readwrite("area_threshold", &blurkit::PipelineConfig::area_threshold);

    m.def("load_gray", [](const std::string& path) { return from_image(blurkit::load_gray(path)); },
          py::arg("path"));
    m.def("save_pgm",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
             const std::string& path) { blurkit::save_pgm(to_image(a), path); },
          py::arg("image"), py::arg("path"));

    m.def("gaussian_kernel",
          [](double sigma, int radius) {
              const auto k = radius > 0 ? blurkit::gaussian_kernel(sigma, radius)
                                        : blurkit::gaussian_kernel(sigma);
              py::array_t<double> out({k.side(), k.side()});
              std::copy(k.weights.begin(), k.weights.end(), out.mutable_data());
              return out;
          },
          py::arg("sigma"), py::arg("radius") = 0);
    m.def("convolve",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, double sigma,
             int radius) {
              const auto k = radius > 0 ? blurkit::gaussian_kernel(sigma, radius)
                                        : blurkit::gaussian_kernel(sigma);
              return from_image(blurkit::convolve(to_image(a), k));
          },
          py::arg("image"), py::arg("sigma"), py::arg("radius") = 0);
    m.def("bilateral_filter",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
             double sigma_spatial, double sigma_range) {
              return from_image(blurkit::bilateral_filter(to_image(a), sigma_spatial, sigma_range));
          },
          py::arg("image"), py::arg("sigma_spatial"), py::arg("sigma_range"));

    m.def("dct2",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
              const auto c = blurkit::dct2(to_image(a));
              py::array_t<double> out({c.m, c.m});
              std::copy(c.coeffs.begin(), c.coeffs.end(), out.mutable_data());
              return out;
          },
          py::arg("patch"));

    m.def("blur_map",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
             const blurkit::BlurMapConfig& cfg) {
              blurkit::BlurMapConfig c = cfg;
              if (c.th2 < 0.0) c.th2 = 0.4 * c.th1;  // config-file sentinel
              return from_image(blurkit::blur_map(to_image(a), c));
          },
          py::arg("image"), py::arg("config") = blurkit::BlurMapConfig{});

    m.def("pcnn_run",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
             const blurkit::PcnnParams& params, bool adapt) {
              const auto stim = to_image(a);
              blurkit::PcnnParams p = params;
              if (adapt) {
                  const auto adapted = blurkit::adapt_params(stim);
                  p.theta_init = adapted.theta_init;
                  p.theta_floor = adapted.theta_floor;
              }
              const auto fm = blurkit::pcnn_run(stim, p);
              py::array_t<int> out({fm.height, fm.width});
              std::copy(fm.first_fire.begin(), fm.first_fire.end(), out.mutable_data());
              return out;
          },
          py::arg("stimulus"), py::arg("params") = blurkit::PcnnParams{}, py::arg("adapt") = true);

    m.def("segment",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
             const blurkit::PipelineConfig& cfg) {
              return from_mask(blurkit::segment(to_image(a), cfg));
          },
          py::arg("image"), py::arg("config") = blurkit::PipelineConfig{});

    m.def("connected_components",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
              const auto labels = blurkit::connected_components(to_mask(a));
              py::array_t<int> out({labels.height, labels.width});
              std::copy(labels.labels.begin(), labels.labels.end(), out.mutable_data());
              return py::make_tuple(out, labels.count);
          },
          py::arg("mask"));

    m.def("compose",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& fg,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& bg,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& chi) {
              return from_image(blurkit::compose(to_image(fg), to_image(bg), to_image(chi)));
          },
          py::arg("fg"), py::arg("bg"), py::arg("chi"));

    m.def("make_fixture",
          [](int height, int width, const std::string& texture, int x0, int y0, int x1, int y1,
             double bg_sigma, unsigned seed) {
              blurkit::SynthSpec spec;
              spec.height = height;
              spec.width = width;
              spec.texture = texture == "checker" ? blurkit::SynthSpec::Texture::Checker
                                                  : blurkit::SynthSpec::Texture::Noise;
              spec.fg_x0 = x0;
              spec.fg_y0 = y0;
              spec.fg_x1 = x1;
              spec.fg_y1 = y1;
              spec.bg_sigma = bg_sigma;
              spec.seed = seed;
              const auto fx = blurkit::make_fixture(spec);
              return py::make_tuple(from_image(fx.image), from_mask(fx.matte));
          },
          py::arg("height") = 64, py::arg("width") = 64, py::arg("texture") = "noise",
          py::arg("x0") = 16, py::arg("y0") = 16, py::arg("x1") = 48, py::arg("y1") = 48,
          py::arg("bg_sigma") = 4.0, py::arg("seed") = 0);

    m.def("precision_recall",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& mask,
             const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& gt) {
              return blurkit::precision_recall(to_mask(mask), to_mask(gt));
          },
          py::arg("mask"), py::arg("gt"));
    m.def("pr_curve",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& score,
             const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& gt) {
              const auto curve = blurkit::pr_curve(to_image(score), to_mask(gt));
              py::array_t<double> out({256, 2});
              auto view = out.mutable_unchecked<2>();
              for (int t = 0; t < 256; ++t) {
                  view(t, 0) = curve.points[t].precision;
                  view(t, 1) = curve.points[t].recall;
              }
              return out;
          },
          py::arg("score_map"), py::arg("gt"));
    m.def("f_alpha", &blurkit::f_alpha, py::arg("precision"), py::arg("recall"),
          py::arg("alpha_sq") = 0.3);

    m.def("edas_rank",
          [](const std::vector<std::string>& alternatives,
             const std::vector<std::string>& criteria,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& scores,
             const std::vector<double>& weights, const std::optional<std::vector<double>>& means,
             bool canonical) {
              blurkit::DecisionMatrix dm;
              dm.alternatives = alternatives;
              for (const auto& name : criteria) {
                  const auto colon = name.rfind(':');
                  const bool benefit = colon == std::string::npos || name.substr(colon + 1) != "cost";
                  dm.criteria.push_back(
                      {colon == std::string::npos ? name : name.substr(0, colon), benefit});
              }
              if (scores.ndim() != 2) throw std::invalid_argument("scores must be 2-D");
              dm.scores.assign(scores.data(), scores.data() + scores.size());
              dm.weights = weights;
              if (means) dm.fixed_means = means;
              blurkit::EdasOptions opts;
              opts.canonical = canonical;
              const auto r = blurkit::edas_rank(dm, opts);
              py::dict out;
              out["means"] = r.means;
              out["sp"] = r.sp;
              out["sn"] = r.sn;
              out["nsp"] = r.nsp;
              out["nsn"] = r.nsn;
              out["score"] = r.score;
              out["rank"] = r.rank;
              return out;
          },
          py::arg("alternatives"), py::arg("criteria"), py::arg("scores"), py::arg("weights"),
          py::arg("means") = std::nullopt, py::arg("canonical") = false);

    m.def("config_help", &blurkit::config_help);
    m.def("parse_config",
          [](const std::string& text) {
              const auto cfg = blurkit::parse_config_text(text);
              return cfg.pipeline;
          },
          py::arg("text"));
}
