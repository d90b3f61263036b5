#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "toponym/embed.hpp"
#include "toponym/errors.hpp"
#include "toponym/graph_io.hpp"
#include "toponym/match.hpp"
#include "toponym/nomenclature.hpp"
#include "toponym/reduce.hpp"
#include "toponym/spectral.hpp"
#include "toponym/synth.hpp"

namespace py = pybind11;
using toponym::ordered_json;

namespace {

// The module trades JSON strings with the Python wrapper; the wrapper turns
// them into plain dicts so callers never see this layer.

toponym::SkeletonGraph skeleton_of(const std::string& text) {
    return toponym::skeleton_from_json(ordered_json::parse(text));
}

toponym::ReducedGraph reduced_of(const std::string& text) {
    return toponym::reduced_from_json(ordered_json::parse(text));
}

std::vector<toponym::ReducedGraph> corpus_of(const std::vector<std::string>& texts) {
    std::vector<toponym::ReducedGraph> corpus;
    corpus.reserve(texts.size());
    for (const auto& t : texts) corpus.push_back(reduced_of(t));
    return corpus;
}

toponym::EmbedModel model_of(const std::string& text) {
    return toponym::model_from_json(ordered_json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Skeleton reduction, nomenclature, and embedding core";

    static py::exception<toponym::Error> base_exc(m, "Error");
    py::register_exception<toponym::IoError>(m, "IoError", base_exc.ptr());
    py::register_exception<toponym::ValidationError>(m, "ValidationError", base_exc.ptr());
    static py::exception<toponym::NameParseError> parse_exc(m, "NameParseError",
                                                            base_exc.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const toponym::NameParseError& e) {
            parse_exc((std::string(e.what()) + " (position " +
                       std::to_string(e.position()) + ")")
                          .c_str());
        }
    });

    m.def(
        "reduce",
        [](const std::string& skeleton, double tau, bool preserve_loops, bool smooth,
           bool tau_relative) {
            toponym::ReduceConfig cfg;
            cfg.tau = tau;
            cfg.preserve_loops = preserve_loops;
            cfg.smooth_degree2 = smooth;
            cfg.tau_relative = tau_relative;
            return toponym::reduced_to_json(toponym::reduce_pipeline(skeleton_of(skeleton), cfg))
                .dump();
        },
        py::arg("skeleton"), py::arg("tau") = 4.0, py::arg("preserve_loops") = true,
        py::arg("smooth") = true, py::arg("tau_relative") = false,
        "Reduce a skeleton graph to its key-node graph, contract short edges, "
        "and return the reduced graph.");

    m.def(
        "name",
        [](const std::string& reduced, const std::string& type) {
            return toponym::name_graph(reduced_of(reduced),
                                       toponym::object_type_from_string(type))
                .text;
        },
        py::arg("reduced"), py::arg("type") = "other",
        "Canonical nomenclature string of a reduced graph.");

    m.def(
        "parse_name",
        [](const std::string& name) { return toponym::reduced_to_json(toponym::parse_name(name)).dump(); },
        py::arg("name"), "Rebuild the reduced topology a name describes.");

    m.def(
        "synth",
        [](const std::string& kind, int n, std::uint64_t seed) {
            toponym::SynthSpec spec;
            spec.kind = toponym::synth_kind_from_string(kind);
            spec.n = n;
            spec.seed = seed;
            return toponym::skeleton_to_json(toponym::generate(spec)).dump();
        },
        py::arg("kind"), py::arg("n"), py::arg("seed") = 0,
        "Generate a synthetic skeleton (tree, path, star, cycle, theta, tadpole, "
        "bicyclic, spiro).");

    m.def(
        "spectrum_cosine",
        [](const std::string& a, const std::string& b, bool weighted) {
            return toponym::spectrum_cosine(
                toponym::laplacian_eigenvalues(reduced_of(a), weighted),
                toponym::laplacian_eigenvalues(reduced_of(b), weighted));
        },
        py::arg("a"), py::arg("b"), py::arg("weighted") = false,
        "Cosine similarity of two graphs' Laplacian spectra.");

    m.def(
        "train",
        [](const std::vector<std::string>& corpus, int epochs, double lr,
           std::uint64_t seed, double kl_weight) {
            toponym::EmbedHyper hyper;
            hyper.epochs = epochs;
            hyper.lr = lr;
            hyper.seed = seed;
            hyper.kl_weight = kl_weight;
            return toponym::model_to_json(toponym::train(corpus_of(corpus), hyper).model)
                .dump();
        },
        py::arg("corpus"), py::arg("epochs") = 200, py::arg("lr") = 0.01,
        py::arg("seed") = 1, py::arg("kl_weight") = 1.0,
        "Train the variational graph autoencoder and return the model.");

    m.def(
        "embed",
        [](const std::string& model, const std::string& reduced) {
            const auto g = reduced_of(reduced);
            const auto emb = toponym::embed_nodes(model_of(model), g);
            std::vector<toponym::NodeId> ids;
            for (const auto& node : g.nodes) ids.push_back(node.id);
            std::vector<std::vector<double>> rows;
            for (Eigen::Index i = 0; i < emb.rows(); ++i) {
                std::vector<double> row;
                for (Eigen::Index j = 0; j < emb.cols(); ++j) row.push_back(emb(i, j));
                rows.push_back(std::move(row));
            }
            return py::make_tuple(ids, rows);
        },
        py::arg("model"), py::arg("reduced"),
        "Posterior-mean node embeddings: (node_ids, rows).");

    m.def(
        "retrieve",
        [](const std::string& query, const std::vector<std::string>& corpus,
           const std::string& model, int topk) {
            std::vector<std::pair<std::string, double>> out;
            for (const auto& hit :
                 toponym::retrieve(reduced_of(query), corpus_of(corpus), model_of(model), topk))
                out.push_back({hit.object_id, hit.score});
            return out;
        },
        py::arg("query"), py::arg("corpus"), py::arg("model"), py::arg("topk") = 2,
        "Nearest corpus graphs by matched-embedding distance: [(object_id, score)].");

    m.def(
        "build_dictionary",
        [](const std::vector<std::string>& corpus, const std::string& model, int k,
           std::uint64_t seed) {
            return toponym::dictionary_to_json(
                       toponym::build_dictionary(corpus_of(corpus), model_of(model), k, seed))
                .dump();
        },
        py::arg("corpus"), py::arg("model"), py::arg("k") = 0, py::arg("seed") = 1,
        "Cluster junction embeddings into a shape dictionary (k=0 picks the "
        "type default).");

    m.def(
        "decompose",
        [](const std::string& reduced, const std::string& dictionary,
           const std::string& model) {
            std::vector<py::tuple> out;
            const auto dec = toponym::decompose(
                reduced_of(reduced),
                toponym::dictionary_from_json(ordered_json::parse(dictionary)),
                model_of(model));
            for (const auto& part : dec.parts)
                out.push_back(py::make_tuple(part.word_index, part.junction_id,
                                             part.removed_node_ids));
            return out;
        },
        py::arg("reduced"), py::arg("dictionary"), py::arg("model"),
        "Greedy junction-by-junction decomposition: [(word_index, junction_id, "
        "removed_node_ids)].");
}
