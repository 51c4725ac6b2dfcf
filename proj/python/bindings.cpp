#include "genverify/error.hpp"
#include "genverify/fixtures.hpp"
#include "genverify/heatmap.hpp"
#include "genverify/interval_prop.hpp"
#include "genverify/manifest.hpp"
#include "genverify/partition.hpp"
#include "genverify/pnm.hpp"
#include "genverify/proofmap.hpp"
#include "genverify/scene.hpp"
#include "genverify/verifier.hpp"
#include "genverify/version.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace gv;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Tensor to_tensor(const DoubleArray &a)
{
    Shape shape(a.shape(), a.shape() + a.ndim());
    if (shape.empty())
        shape = {1};
    return Tensor(shape, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> to_array(const Tensor &t)
{
    py::array_t<double> out(std::vector<py::ssize_t>(t.shape().begin(), t.shape().end()));
    std::copy(t.data().begin(), t.data().end(), out.mutable_data());
    return out;
}

Box to_box(const std::vector<std::pair<double, double>> &bounds)
{
    Box box;
    for (const auto &[lo, hi] : bounds) {
        if (!(lo <= hi))
            throw py::value_error("interval lower bound exceeds upper bound");
        box.push_back({lo, hi});
    }
    return box;
}

py::tuple interval_tuple(const Interval &iv) { return py::make_tuple(iv.lo, iv.hi); }

py::list box_list(const Box &box)
{
    py::list out;
    for (const auto &iv : box)
        out.append(interval_tuple(iv));
    return out;
}

std::vector<std::size_t> grid_arg(const py::object &grid)
{
    if (py::isinstance<py::str>(grid))
        return parse_grid(grid.cast<std::string>());
    return grid.cast<std::vector<std::size_t>>();
}

std::vector<Axis> domain_arg(const py::object &domain)
{
    if (py::isinstance<py::str>(domain))
        return parse_ranges(domain.cast<std::string>());
    // Sequence of (name, lo, hi) tuples; z* names are latent.
    std::vector<Axis> axes;
    for (const auto &item : domain) {
        const auto t = item.cast<std::tuple<std::string, double, double>>();
        const auto &name = std::get<0>(t);
        axes.push_back({name, {std::get<1>(t), std::get<2>(t)}, !name.empty() && name[0] == 'z'});
    }
    return axes;
}

SolverConfig solver_config(double delta, std::uint64_t max_splits, std::size_t probes,
                           std::uint64_t seed, double time_limit)
{
    SolverConfig cfg;
    cfg.delta = delta;
    cfg.max_splits = max_splits;
    cfg.candidate_points_per_box = probes;
    cfg.seed = seed;
    cfg.time_limit_s = time_limit;
    return cfg;
}

py::dict result_dict(const CellResult &r)
{
    py::dict d;
    d["verdict"] = verdict_name(r.verdict);
    d["code"] = verdict_code(r.verdict);
    d["note"] = r.note;
    d["boxes_explored"] = r.stats.boxes_explored;
    d["boxes_pruned"] = r.stats.boxes_pruned;
    d["boxes_unresolved"] = r.stats.boxes_unresolved;
    d["probes"] = r.stats.probes;
    d["budget_exhausted"] = r.stats.budget_exhausted;
    d["timed_out"] = r.stats.timed_out;
    d["wall_time_s"] = r.stats.wall_time_s;
    if (r.counterexample) {
        d["point"] = r.counterexample->point;
        d["output"] = r.counterexample->output;
        d["violation"] = r.counterexample->violation;
        d["image"] = to_array(r.counterexample->image);
    } else {
        d["point"] = py::none();
    }
    return d;
}

py::dict entry_dict(const CellEntry &e)
{
    py::dict d;
    d["index"] = e.index;
    d["bounds"] = box_list(e.bounds);
    d["result"] = e.result;
    d["time_s"] = e.time_s;
    d["boxes_explored"] = e.boxes_explored;
    d["boxes_pruned"] = e.boxes_pruned;
    d["presampled"] = e.presampled;
    d["note"] = e.note;
    if (e.witness) {
        py::dict w;
        w["point"] = e.witness->point;
        w["output"] = e.witness->output;
        w["violation"] = e.witness->violation;
        d["witness"] = w;
    } else {
        d["witness"] = py::none();
    }
    return d;
}

HeatmapMode heatmap_mode(const std::string &mode)
{
    if (mode == "results")
        return HeatmapMode::Results;
    if (mode == "timing")
        return HeatmapMode::Timing;
    throw py::value_error("mode must be 'results' or 'timing'");
}

py::tuple counts_tuple(const ResultCounts &c) { return py::make_tuple(c.proved, c.sat, c.unknown); }

} // namespace

PYBIND11_MODULE(_genverify, m)
{
    m.doc() = "Interval verification of decoder/regressor compositions";
    m.attr("__version__") = kVersion;

    // Base first: later registrations are tried first, so subclasses win.
    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ShapeError>(m, "ShapeError", error.ptr());
    py::register_exception<FormatError>(m, "FormatError", error.ptr());
    py::register_exception<VerifierError>(m, "VerifierError", error.ptr());

    // -- networks ----------------------------------------------------------
    py::class_<NetworkSpec>(m, "Network")
        .def_static("load", &load_network, py::arg("path"))
        .def("save", [](const NetworkSpec &n, const std::filesystem::path &p) { save_network(n, p); },
             py::arg("path"))
        .def_property_readonly("name", &NetworkSpec::name)
        .def_property_readonly("role", [](const NetworkSpec &n) { return role_name(n.role()); })
        .def_property_readonly("param_set", &NetworkSpec::param_set)
        .def_property_readonly("input_shape", &NetworkSpec::input_shape)
        .def_property_readonly("output_shape", &NetworkSpec::output_shape)
        .def_property_readonly("parameter_count", &NetworkSpec::parameter_count)
        .def_property_readonly("layer_kinds",
                               [](const NetworkSpec &n) {
                                   std::vector<std::string> kinds;
                                   for (const auto &l : n.layers())
                                       kinds.push_back(layer_kind(l));
                                   return kinds;
                               })
        .def_property_readonly("descale",
                               [](const NetworkSpec &n) -> py::object {
                                   if (!n.descale())
                                       return py::none();
                                   return py::make_tuple(n.descale()->scale, n.descale()->offset);
                               })
        .def("forward",
             [](const NetworkSpec &n, const DoubleArray &x) {
                 return to_array(forward(n, to_tensor(x).reshaped(n.input_shape())));
             },
             py::arg("x"), "Evaluates the network on an input of its input shape.")
        .def("propagate",
             [](const NetworkSpec &n, const DoubleArray &lo, const DoubleArray &hi) {
                 const auto box = IntervalTensor::from_bounds(to_tensor(lo).reshaped(n.input_shape()),
                                                              to_tensor(hi).reshaped(n.input_shape()));
                 const auto out = propagate(n, box);
                 Tensor l(out.shape()), h(out.shape());
                 for (std::size_t i = 0; i < out.size(); ++i) {
                     l[i] = out[i].lo;
                     h[i] = out[i].hi;
                 }
                 return py::make_tuple(to_array(l), to_array(h));
             },
             py::arg("lo"), py::arg("hi"), "Sound element-wise enclosure of the output over a box.");

    py::class_<ComposedNetwork>(m, "ComposedNetwork")
        .def(py::init<NetworkSpec, NetworkSpec>(), py::arg("decoder"), py::arg("regressor"))
        .def_static("load", &load_composed, py::arg("path"))
        .def("save", [](const ComposedNetwork &n, const std::filesystem::path &p) { save_composed(n, p); },
             py::arg("path"))
        .def_property_readonly("decoder", &ComposedNetwork::decoder)
        .def_property_readonly("regressor", &ComposedNetwork::regressor)
        .def_property_readonly("input_dim", &ComposedNetwork::input_dim)
        .def("forward",
             [](const ComposedNetwork &n, const std::vector<double> &c) { return forward_composed(n, c); },
             py::arg("config"), "P(G(c)).")
        .def("decode",
             [](const ComposedNetwork &n, const std::vector<double> &c) {
                 return to_array(forward(n.decoder(), Tensor::vector(c)));
             },
             py::arg("config"), "Decoder image G(c).")
        .def("propagate",
             [](const ComposedNetwork &n, const std::vector<std::pair<double, double>> &bounds) {
                 const auto box = to_box(bounds);
                 return interval_tuple(propagate_composed(n, IntervalTensor({box.size()}, box)));
             },
             py::arg("bounds"), "Enclosure of P(G(c)) over a box given as [(lo, hi), ...].")
        .def("error_interval",
             [](const ComposedNetwork &n, const std::vector<std::pair<double, double>> &bounds,
                std::size_t truth) {
                 const auto box = to_box(bounds);
                 return interval_tuple(error_interval(n, IntervalTensor({box.size()}, box), truth));
             },
             py::arg("bounds"), py::arg("truth") = 0);

    // -- verifier ------------------------------------------------------------
    m.def("check_candidate",
          [](const ComposedNetwork &net, const std::vector<double> &point, double epsilon,
             std::size_t truth) -> py::object {
              const auto v = check_candidate(net, point, {epsilon, truth});
              if (!v)
                  return py::none();
              return py::make_tuple(v->output, v->magnitude);
          },
          py::arg("net"), py::arg("point"), py::arg("epsilon") = 0.25, py::arg("truth") = 0,
          "Returns (output, violation) when the point violates the property, else None.");

    m.def("prove_cell",
          [](const ComposedNetwork &net, const std::vector<std::pair<double, double>> &bounds,
             double epsilon, std::size_t truth, double delta, std::uint64_t max_splits,
             std::size_t probes, std::uint64_t seed, double time_limit,
             std::vector<std::size_t> index) {
              Cell cell{to_box(bounds), std::move(index)};
              if (cell.index.empty())
                  cell.index.assign(cell.bounds.size(), 0);
              CellResult r;
              {
                  py::gil_scoped_release release;
                  r = prove_cell(net, cell, {epsilon, truth},
                                 solver_config(delta, max_splits, probes, seed, time_limit));
              }
              return result_dict(r);
          },
          py::arg("net"), py::arg("bounds"), py::arg("epsilon") = 0.25, py::arg("truth") = 0,
          py::arg("delta") = 1e-3, py::arg("max_splits") = 200000, py::arg("probes") = 6,
          py::arg("seed") = 0x5eed, py::arg("time_limit") = 300.0,
          py::arg("index") = std::vector<std::size_t>{});

    // -- partitions and proof maps ----------------------------------------------
    py::class_<Partition>(m, "Partition")
        .def(py::init([](const py::object &domain, const py::object &grid) {
                 return build_partition(domain_arg(domain), grid_arg(grid));
             }),
             py::arg("domain"), py::arg("grid"),
             "domain: 'd=[lo,hi];theta=[lo,hi]' or [(name, lo, hi), ...]; grid: '20x20' or [20, 20].")
        .def_property_readonly("size", &Partition::size)
        .def("__len__", &Partition::size)
        .def_property_readonly("counts", &Partition::counts)
        .def_property_readonly("axis_names",
                               [](const Partition &p) {
                                   std::vector<std::string> names;
                                   for (const auto &a : p.axes())
                                       names.push_back(a.name);
                                   return names;
                               })
        .def("boundaries", &Partition::boundaries, py::arg("axis"))
        .def("cell",
             [](const Partition &p, std::size_t flat) {
                 if (flat >= p.size())
                     throw py::index_error("cell index out of range");
                 const Cell c = p.cell(flat);
                 return py::make_tuple(box_list(c.bounds), c.index);
             },
             py::arg("flat"), "(bounds, grid index) of a cell.");

    py::class_<ProofMap>(m, "ProofMap")
        .def_static("load", &load_complete_proofmap, py::arg("path"))
        .def("save", [](const ProofMap &map, const std::filesystem::path &p) { save_proofmap(map, p); },
             py::arg("path"))
        .def_readonly("partition", &ProofMap::partition)
        .def_property_readonly("epsilon", [](const ProofMap &m) { return m.property.epsilon; })
        .def_property_readonly("truth", [](const ProofMap &m) { return m.property.ground_truth_coord; })
        .def("__len__", [](const ProofMap &m) { return m.entries.size(); })
        .def_property_readonly("entries",
                               [](const ProofMap &m) {
                                   py::list out;
                                   for (const auto &e : m.entries)
                                       out.append(entry_dict(e));
                                   return out;
                               })
        .def_property_readonly("results",
                               [](const ProofMap &m) {
                                   const auto &counts = m.partition.counts();
                                   py::array_t<int> out(std::vector<py::ssize_t>(counts.begin(), counts.end()));
                                   auto *p = out.mutable_data();
                                   for (std::size_t i = 0; i < m.entries.size(); ++i)
                                       p[i] = m.entries[i].result;
                                   return out;
                               },
                               "Grid-shaped array of 1 (SAT), -1 (proved), 0 (unknown).")
        .def("counts", [](const ProofMap &m) { return counts_tuple(aggregate(m)); },
             "(proved, sat, unknown)")
        .def("table", [](const ProofMap &m) { return format_counts_table(aggregate(m)); })
        .def("serialize",
             [](const ProofMap &m, bool timing) {
                 return timing ? serialize_proofmap(m) : serialize_proofmap_without_timing(m);
             },
             py::arg("timing") = true);

    m.def("build_proofmap",
          [](const ComposedNetwork &net, const Partition &partition, double epsilon, std::size_t truth,
             double delta, std::uint64_t max_splits, std::size_t probes, std::uint64_t seed,
             double time_limit, std::size_t jobs, std::size_t presample) {
              ProofMapOptions opts;
              opts.jobs = jobs;
              opts.presample_points = presample;
              py::gil_scoped_release release;
              return build_proofmap(partition, net, {epsilon, truth},
                                    solver_config(delta, max_splits, probes, seed, time_limit),
                                    std::move(opts));
          },
          py::arg("net"), py::arg("partition"), py::arg("epsilon") = 0.25, py::arg("truth") = 0,
          py::arg("delta") = 1e-3, py::arg("max_splits") = 200000, py::arg("probes") = 6,
          py::arg("seed") = 0x5eed, py::arg("time_limit") = 300.0, py::arg("jobs") = 5,
          py::arg("presample") = 1);

    m.def("aggregate",
          [](const std::vector<int> &results) { return counts_tuple(aggregate(results)); },
          py::arg("results"), "(proved, sat, unknown) counts of map-encoded results.");
    m.def("rounded_percent", &rounded_percent, py::arg("count"), py::arg("total"));
    m.def("format_counts_table",
          [](std::size_t proved, std::size_t sat, std::size_t unknown) {
              return format_counts_table({proved, sat, unknown});
          },
          py::arg("proved"), py::arg("sat"), py::arg("unknown"));

    m.def("render_heatmap",
          [](const ProofMap &map, const std::string &mode, std::size_t scale) {
              py::list out;
              for (const auto &s : render_heatmap(map, heatmap_mode(mode), scale)) {
                  py::array_t<std::uint8_t> img({static_cast<py::ssize_t>(s.image.height),
                                                 static_cast<py::ssize_t>(s.image.width),
                                                 py::ssize_t{3}});
                  std::copy(s.image.rgb.begin(), s.image.rgb.end(), img.mutable_data());
                  out.append(py::make_tuple(s.label, img));
              }
              return out;
          },
          py::arg("map"), py::arg("mode") = "results", py::arg("scale") = 16,
          "List of (label, HxWx3 uint8 image), one per latent slice.");
    m.def("emit_heatmap",
          [](const ProofMap &map, const std::string &out, const std::string &mode, std::size_t scale) {
              return emit_heatmap(map, heatmap_mode(mode), out, scale);
          },
          py::arg("map"), py::arg("out"), py::arg("mode") = "results", py::arg("scale") = 16);

    // -- scenes ---------------------------------------------------------------
    m.def("render_scene",
          [](double d, double theta) { return to_array(render_scene({d, theta})); },
          py::arg("d"), py::arg("theta"));
    m.def("apply_break",
          [](const DoubleArray &img, double width, double anchor) {
              return to_array(apply_break(to_tensor(img), {width, anchor}));
          },
          py::arg("image"), py::arg("width"), py::arg("anchor") = BreakMask{}.anchor);
    m.def("line_column",
          [](const DoubleArray &img, std::size_t row) { return line_column(to_tensor(img), row); },
          py::arg("image"), py::arg("row"));
    m.def("ssim",
          [](const DoubleArray &a, const DoubleArray &b) { return ssim(to_tensor(a), to_tensor(b)); },
          py::arg("a"), py::arg("b"));
    m.def("generate_dataset",
          [](const std::filesystem::path &dir, std::size_t n, std::uint64_t seed,
             std::pair<double, double> d_range, std::pair<double, double> theta_range,
             double break_prob, std::pair<double, double> break_width) {
              DatasetSpec spec;
              spec.n = n;
              spec.seed = seed;
              spec.d_range = {d_range.first, d_range.second};
              spec.theta_range = {theta_range.first, theta_range.second};
              spec.break_prob = break_prob;
              spec.break_width = {break_width.first, break_width.second};
              return generate_dataset(dir, spec).size();
          },
          py::arg("dir"), py::arg("n"), py::arg("seed") = 0x5eed,
          py::arg("d_range") = std::pair{-3.0, 0.0}, py::arg("theta_range") = std::pair{-0.1, 0.2},
          py::arg("break_prob") = 0.5, py::arg("break_width") = std::pair{2.0, 8.0},
          "Writes img_NNNNNN.pgm files plus labels.csv; returns the image count.");
    m.def("read_pgm", [](const std::filesystem::path &p) { return to_array(read_pgm(p)); },
          py::arg("path"));
    m.def("write_pgm",
          [](const std::filesystem::path &p, const DoubleArray &img) { write_pgm(p, to_tensor(img)); },
          py::arg("path"), py::arg("image"));

    // -- fixtures --------------------------------------------------------------
    auto fx = m.def_submodule("fixtures", "Seeded and hand-built networks");
    fx.def("identity", &fixtures::identity, py::arg("input_dim") = 2);
    fx.def("constant_bias", &fixtures::constant_bias, py::arg("bias") = 1.0, py::arg("input_dim") = 2);
    fx.def("random_tiny", &fixtures::random_tiny, py::arg("seed"), py::arg("input_dim") = 2);
    fx.def("tracking_tiny",
           [](std::uint64_t seed, const py::object &domain) {
               return fixtures::tracking_tiny(seed, domain_arg(domain));
           },
           py::arg("seed"), py::arg("domain"));
    fx.def("tracking_exp1",
           [](std::uint64_t seed, const py::object &domain) {
               return fixtures::tracking_exp1(seed, domain_arg(domain));
           },
           py::arg("seed"), py::arg("domain"));
    fx.def("decoder_exp1", &fixtures::decoder_exp1, py::arg("seed"), py::arg("input_dim") = 2);
    fx.def("regressor_exp1", &fixtures::regressor_exp1, py::arg("seed"));
    fx.def("regressor_exp2",
           [](std::uint64_t seed, double scale, double offset) {
               return fixtures::regressor_exp2(seed, {scale, offset});
           },
           py::arg("seed"), py::arg("scale") = 3.0, py::arg("offset") = -3.0);
    fx.def("cvae_encoder", &fixtures::cvae_encoder, py::arg("seed"), py::arg("config_dim") = 2);
}
