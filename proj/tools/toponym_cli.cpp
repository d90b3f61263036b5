#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toponym/embed.hpp"
#include "toponym/errors.hpp"
#include "toponym/graph_io.hpp"
#include "toponym/match.hpp"
#include "toponym/nomenclature.hpp"
#include "toponym/reduce.hpp"
#include "toponym/spectral.hpp"
#include "toponym/synth.hpp"
#include "toponym/topology.hpp"

namespace fs = std::filesystem;
using toponym::ordered_json;

namespace {

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Sorted .json paths of a directory. IoError when the directory is missing.
std::vector<fs::path> json_files(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw toponym::IoError("MissingDirectory", "not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<toponym::ReducedGraph> load_reduced_dir(const fs::path& dir) {
    std::vector<toponym::ReducedGraph> out;
    for (const auto& p : json_files(dir)) out.push_back(toponym::load_reduced(p));
    return out;
}

void write_text_file(const std::string& text, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw toponym::IoError("Unwritable", "cannot open " + path.string());
    out << text;
    if (!out) throw toponym::IoError("WriteFailed", "short write to " + path.string());
}

// Values for flags the user did not pass can come from a --config document;
// explicit flags always win.
class Config {
public:
    void load(const std::string& path) {
        if (!path.empty()) j_ = toponym::read_json_file(path);
    }
    template <typename T>
    void fill(const CLI::Option* opt, const char* key, T& var) const {
        if (opt != nullptr && opt->count() > 0) return;
        if (!j_.is_object() || !j_.contains(key)) return;
        try {
            var = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            toponym::throw_validation("BadConfig", std::string("config key '") + key +
                                                       "' has the wrong type");
        }
    }

private:
    ordered_json j_;
};

int parse_k(const std::string& s) {
    if (s == "auto") return 0;
    try {
        std::size_t used = 0;
        const int k = std::stoi(s, &used);
        if (used != s.size() || k < 1) throw std::invalid_argument(s);
        return k;
    } catch (const std::exception&) {
        toponym::throw_validation("BadK", "--k must be a positive integer or 'auto'");
    }
}

ordered_json embedding_to_json(const toponym::ReducedGraph& g, const Eigen::MatrixXd& emb) {
    ordered_json j;
    j["schema"] = "toponym-embedding/1";
    j["object_id"] = g.object_id;
    ordered_json ids = ordered_json::array();
    for (const auto& node : g.nodes) ids.push_back(node.id);
    j["node_ids"] = std::move(ids);
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < emb.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < emb.cols(); ++c) row.push_back(emb(i, c));
        rows.push_back(std::move(row));
    }
    j["embedding"] = std::move(rows);
    return j;
}

const char* kPartPalette[10] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                                "#a65628", "#f781bf", "#17becf", "#66a61e", "#999999"};

std::string decomposition_dot(const toponym::ReducedGraph& g,
                              const toponym::Decomposition& dec) {
    std::map<toponym::NodeId, std::size_t> part_of;
    for (std::size_t p = 0; p < dec.parts.size(); ++p)
        for (toponym::NodeId id : dec.parts[p].removed_node_ids) part_of[id] = p;
    std::string dot = "graph decomposition {\n  node [shape=circle];\n";
    for (const auto& node : g.nodes) {
        dot += "  n" + std::to_string(node.id) + " [label=\"" + std::to_string(node.id) + "\"";
        if (auto it = part_of.find(node.id); it != part_of.end()) {
            dot += ", style=filled, fillcolor=\"";
            dot += kPartPalette[it->second % 10];
            dot += "\"";
        }
        dot += "];\n";
    }
    for (const auto& e : g.edges)
        dot += "  n" + std::to_string(e.u) + " -- n" + std::to_string(e.v) + " [label=\"" +
               fmt(e.length, 1) + "\"];\n";
    dot += "}\n";
    return dot;
}

struct ReduceArgs {
    std::string in, out, emit_dot, config;
    toponym::ReduceConfig cfg;
};

struct PipelineArgs {
    std::string in, out, type = "other", config;
    toponym::ReduceConfig cfg;
    std::uint64_t seed = 1;
};

int run(int argc, char** argv) {
    CLI::App app{"Skeleton reduction, nomenclature, and embedding toolkit"};
    app.require_subcommand(1);

    // reduce -----------------------------------------------------------------
    ReduceArgs red;
    auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a skeleton graph");
    reduce_cmd->add_option("--in", red.in, "Skeleton JSON")->required();
    reduce_cmd->add_option("--out", red.out, "Reduced-graph JSON")->required();
    auto* red_tau = reduce_cmd->add_option("--tau", red.cfg.tau, "Contraction threshold (default 4.0)");
    auto* red_pl = reduce_cmd->add_flag("--preserve-loops,!--no-preserve-loops", red.cfg.preserve_loops,
                                        "Keep self-loop paths as mid-node loops (default on)");
    auto* red_sm = reduce_cmd->add_flag("--smooth,!--no-smooth", red.cfg.smooth_degree2,
                                        "Merge role-degenerate degree-2 chains (default on)");
    auto* red_tr = reduce_cmd->add_flag("--tau-relative", red.cfg.tau_relative,
                                        "Treat tau as a fraction of total edge length");
    reduce_cmd->add_option("--emit-dot", red.emit_dot, "Also write a Graphviz view");
    reduce_cmd->add_option("--config", red.config, "JSON config file (flags win)");

    // name -------------------------------------------------------------------
    std::string name_in, name_type = "other", name_config;
    auto* name_cmd = app.add_subcommand("name", "Print the canonical name of a reduced graph");
    name_cmd->add_option("--in", name_in, "Reduced-graph JSON")->required();
    auto* name_type_opt = name_cmd->add_option("--type", name_type, "mito|pyr|other (default other)")
                              ->check(CLI::IsMember({"mito", "pyr", "other"}));
    name_cmd->add_option("--config", name_config, "JSON config file (flags win)");

    // parse ------------------------------------------------------------------
    std::string parse_text, parse_out;
    auto* parse_cmd = app.add_subcommand("parse", "Rebuild the topology named by a nomenclature string");
    parse_cmd->add_option("--name", parse_text, "Name to parse")->required();
    parse_cmd->add_option("--out", parse_out, "Reduced-graph JSON (stdout when omitted)");

    // eval -------------------------------------------------------------------
    std::string eval_pred, eval_gt, eval_config;
    double eval_threshold = 0.95;
    bool eval_weighted = false;
    auto* eval_cmd = app.add_subcommand("eval", "Spectral comparison of paired reduced graphs");
    eval_cmd->add_option("--pred", eval_pred, "Directory of predicted reduced graphs")->required();
    eval_cmd->add_option("--gt", eval_gt, "Directory of reference reduced graphs")->required();
    auto* eval_th = eval_cmd->add_option("--threshold", eval_threshold, "Cosine threshold (default 0.95)");
    eval_cmd->add_flag("--weighted", eval_weighted, "Use edge lengths as Laplacian weights");
    eval_cmd->add_option("--config", eval_config, "JSON config file (flags win)");

    // train-embed ------------------------------------------------------------
    std::string te_corpus, te_out, te_config;
    toponym::EmbedHyper te_hyper;
    auto* te_cmd = app.add_subcommand("train-embed", "Train the node-embedding model");
    te_cmd->add_option("--corpus", te_corpus, "Directory of reduced graphs")->required();
    te_cmd->add_option("--out", te_out, "Model JSON")->required();
    auto* te_seed = te_cmd->add_option("--seed", te_hyper.seed, "RNG seed (default 1)");
    auto* te_epochs = te_cmd->add_option("--epochs", te_hyper.epochs, "Training epochs (default 200)");
    auto* te_lr = te_cmd->add_option("--lr", te_hyper.lr, "Adam learning rate (default 0.01)");
    auto* te_klw = te_cmd->add_option("--kl-weight", te_hyper.kl_weight, "KL term weight (default 1.0)");
    te_cmd->add_option("--config", te_config, "JSON config file (flags win)");

    // embed ------------------------------------------------------------------
    std::string em_model, em_in, em_out;
    auto* em_cmd = app.add_subcommand("embed", "Embed one reduced graph with a trained model");
    em_cmd->add_option("--model", em_model, "Model JSON")->required();
    em_cmd->add_option("--in", em_in, "Reduced-graph JSON")->required();
    em_cmd->add_option("--out", em_out, "Embedding JSON")->required();

    // retrieve ---------------------------------------------------------------
    std::string rt_query, rt_corpus, rt_model, rt_config;
    int rt_topk = 2;
    auto* rt_cmd = app.add_subcommand("retrieve", "Rank corpus graphs by embedding similarity");
    rt_cmd->add_option("--query", rt_query, "Reduced-graph JSON")->required();
    rt_cmd->add_option("--corpus", rt_corpus, "Directory of reduced graphs")->required();
    rt_cmd->add_option("--model", rt_model, "Model JSON")->required();
    auto* rt_topk_opt = rt_cmd->add_option("--topk", rt_topk, "Result count (default 2)");
    rt_cmd->add_option("--config", rt_config, "JSON config file (flags win)");

    // build-dict -------------------------------------------------------------
    std::string bd_corpus, bd_model, bd_out, bd_config, bd_k = "auto";
    std::uint64_t bd_seed = 1;
    auto* bd_cmd = app.add_subcommand("build-dict", "Cluster junction embeddings into a dictionary");
    bd_cmd->add_option("--corpus", bd_corpus, "Directory of reduced graphs")->required();
    bd_cmd->add_option("--model", bd_model, "Model JSON")->required();
    bd_cmd->add_option("--out", bd_out, "Dictionary JSON")->required();
    auto* bd_k_opt = bd_cmd->add_option("--k", bd_k, "Cluster count or 'auto' (100 mito / 50 pyr)");
    auto* bd_seed_opt = bd_cmd->add_option("--seed", bd_seed, "RNG seed (default 1)");
    bd_cmd->add_option("--config", bd_config, "JSON config file (flags win)");

    // decompose --------------------------------------------------------------
    std::string dc_in, dc_dict, dc_model, dc_dot;
    auto* dc_cmd = app.add_subcommand("decompose", "Carve a query into dictionary parts");
    dc_cmd->add_option("--in", dc_in, "Reduced-graph JSON")->required();
    dc_cmd->add_option("--dict", dc_dict, "Dictionary JSON")->required();
    dc_cmd->add_option("--model", dc_model, "Model JSON")->required();
    dc_cmd->add_option("--emit-dot", dc_dot, "Graphviz view with per-part colors");

    // synth ------------------------------------------------------------------
    toponym::SynthSpec sy_spec;
    std::string sy_kind = "tree", sy_out, sy_config;
    auto* sy_cmd = app.add_subcommand("synth", "Generate a synthetic skeleton");
    auto* sy_kind_opt = sy_cmd->add_option("--kind", sy_kind,
                                           "tree|path|star|cycle|theta|tadpole|bicyclic|spiro");
    sy_cmd->add_option("--n", sy_spec.n, "Node count")->required();
    auto* sy_seed = sy_cmd->add_option("--seed", sy_spec.seed, "RNG seed (default 0)");
    sy_cmd->add_option("--out", sy_out, "Skeleton JSON")->required();
    sy_cmd->add_option("--length-min", sy_spec.length_range.first, "Edge length lower bound (default 0.5)");
    sy_cmd->add_option("--length-max", sy_spec.length_range.second, "Edge length upper bound (default 2.0)");
    sy_cmd->add_option("--radius-min", sy_spec.radius_range.first, "Node radius lower bound (default 0.5)");
    sy_cmd->add_option("--radius-max", sy_spec.radius_range.second, "Node radius upper bound (default 3.0)");
    sy_cmd->add_option("--config", sy_config, "JSON config file (flags win)");

    // export-dot -------------------------------------------------------------
    std::string xd_in, xd_out;
    auto* xd_cmd = app.add_subcommand("export-dot", "Graphviz view of a skeleton or reduced graph");
    xd_cmd->add_option("--in", xd_in, "Graph JSON")->required();
    xd_cmd->add_option("--out", xd_out, "DOT file")->required();

    // pipeline ---------------------------------------------------------------
    PipelineArgs pl;
    auto* pl_cmd = app.add_subcommand("pipeline", "reduce + name over a directory, with manifest");
    pl_cmd->add_option("--in", pl.in, "Directory of skeleton JSON files")->required();
    pl_cmd->add_option("--out", pl.out, "Output directory")->required();
    auto* pl_tau = pl_cmd->add_option("--tau", pl.cfg.tau, "Contraction threshold (default 4.0)");
    auto* pl_pl = pl_cmd->add_flag("--preserve-loops,!--no-preserve-loops", pl.cfg.preserve_loops,
                                   "Keep self-loop paths (default on)");
    auto* pl_sm = pl_cmd->add_flag("--smooth,!--no-smooth", pl.cfg.smooth_degree2,
                                   "Merge role-degenerate chains (default on)");
    auto* pl_tr = pl_cmd->add_flag("--tau-relative", pl.cfg.tau_relative,
                                   "Treat tau as a fraction of total edge length");
    auto* pl_type = pl_cmd->add_option("--type", pl.type, "mito|pyr|other (default other)")
                        ->check(CLI::IsMember({"mito", "pyr", "other"}));
    auto* pl_seed = pl_cmd->add_option("--seed", pl.seed, "RNG seed (default 1)");
    pl_cmd->add_option("--config", pl.config, "JSON config file (flags win)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    if (reduce_cmd->parsed()) {
        Config cfg;
        cfg.load(red.config);
        cfg.fill(red_tau, "tau", red.cfg.tau);
        cfg.fill(red_pl, "preserve_loops", red.cfg.preserve_loops);
        cfg.fill(red_sm, "smooth", red.cfg.smooth_degree2);
        cfg.fill(red_tr, "tau_relative", red.cfg.tau_relative);
        const auto skel = toponym::load_skeleton(red.in);
        const auto reduced = toponym::reduce_pipeline(skel, red.cfg);
        toponym::save_reduced(reduced, red.out);
        if (!red.emit_dot.empty()) write_text_file(toponym::reduced_to_dot(reduced), red.emit_dot);
        return 0;
    }

    if (name_cmd->parsed()) {
        Config cfg;
        cfg.load(name_config);
        cfg.fill(name_type_opt, "type", name_type);
        const auto g = toponym::load_reduced(name_in);
        std::cout << toponym::name_graph(g, toponym::object_type_from_string(name_type)).text
                  << "\n";
        return 0;
    }

    if (parse_cmd->parsed()) {
        try {
            const auto g = toponym::parse_name(parse_text);
            if (parse_out.empty())
                std::cout << toponym::reduced_to_json(g).dump(2) << "\n";
            else
                toponym::save_reduced(g, parse_out);
        } catch (const toponym::NameParseError& e) {
            std::cerr << "error: " << e.kind() << ": " << e.what() << "\n  " << parse_text
                      << "\n  " << std::string(e.position(), ' ') << "^\n";
            return 2;
        }
        return 0;
    }

    if (eval_cmd->parsed()) {
        Config cfg;
        cfg.load(eval_config);
        cfg.fill(eval_th, "threshold", eval_threshold);
        std::map<std::string, fs::path> pred_by_name;
        for (const auto& p : json_files(eval_pred)) pred_by_name[p.filename().string()] = p;
        std::vector<std::pair<toponym::Spectrum, toponym::Spectrum>> pairs;
        double cosine_sum = 0.0;
        for (const auto& gt_path : json_files(eval_gt)) {
            const auto it = pred_by_name.find(gt_path.filename().string());
            if (it == pred_by_name.end())
                throw toponym::IoError("MissingPrediction",
                                       "no prediction for " + gt_path.filename().string());
            const auto gt = toponym::load_reduced(gt_path);
            const auto pred = toponym::load_reduced(it->second);
            pairs.push_back({toponym::laplacian_eigenvalues(pred, eval_weighted),
                             toponym::laplacian_eigenvalues(gt, eval_weighted)});
            cosine_sum += toponym::spectrum_cosine(pairs.back().first, pairs.back().second);
        }
        if (pairs.empty())
            toponym::throw_validation("EmptyList", "no graph pairs between --pred and --gt");
        std::cout << "cosine\t" << fmt(cosine_sum / double(pairs.size()), 6) << "\n"
                  << "accuracy\t" << fmt(toponym::accuracy(pairs, eval_threshold), 6) << "\n";
        return 0;
    }

    if (te_cmd->parsed()) {
        Config cfg;
        cfg.load(te_config);
        cfg.fill(te_seed, "seed", te_hyper.seed);
        cfg.fill(te_epochs, "epochs", te_hyper.epochs);
        cfg.fill(te_lr, "lr", te_hyper.lr);
        cfg.fill(te_klw, "kl_weight", te_hyper.kl_weight);
        const auto corpus = load_reduced_dir(te_corpus);
        const auto result = toponym::train(corpus, te_hyper);
        toponym::write_json_file(toponym::model_to_json(result.model), te_out);
        return 0;
    }

    if (em_cmd->parsed()) {
        const auto model = toponym::model_from_json(toponym::read_json_file(em_model));
        const auto g = toponym::load_reduced(em_in);
        toponym::write_json_file(embedding_to_json(g, toponym::embed_nodes(model, g)), em_out);
        return 0;
    }

    if (rt_cmd->parsed()) {
        Config cfg;
        cfg.load(rt_config);
        cfg.fill(rt_topk_opt, "topk", rt_topk);
        const auto model = toponym::model_from_json(toponym::read_json_file(rt_model));
        const auto query = toponym::load_reduced(rt_query);
        const auto corpus = load_reduced_dir(rt_corpus);
        for (const auto& hit : toponym::retrieve(query, corpus, model, rt_topk))
            std::cout << hit.object_id << "\t" << fmt(hit.score, 9) << "\n";
        return 0;
    }

    if (bd_cmd->parsed()) {
        Config cfg;
        cfg.load(bd_config);
        cfg.fill(bd_k_opt, "k", bd_k);
        cfg.fill(bd_seed_opt, "seed", bd_seed);
        const auto model = toponym::model_from_json(toponym::read_json_file(bd_model));
        const auto corpus = load_reduced_dir(bd_corpus);
        const auto dict = toponym::build_dictionary(corpus, model, parse_k(bd_k), bd_seed);
        toponym::write_json_file(toponym::dictionary_to_json(dict), bd_out);
        return 0;
    }

    if (dc_cmd->parsed()) {
        const auto model = toponym::model_from_json(toponym::read_json_file(dc_model));
        const auto dict = toponym::dictionary_from_json(toponym::read_json_file(dc_dict));
        const auto g = toponym::load_reduced(dc_in);
        const auto dec = toponym::decompose(g, dict, model);
        std::cout << "part\tword\tjunction\tremoved\n";
        for (std::size_t p = 0; p < dec.parts.size(); ++p) {
            const auto& part = dec.parts[p];
            std::string ids;
            for (toponym::NodeId id : part.removed_node_ids) {
                if (!ids.empty()) ids += ",";
                ids += std::to_string(id);
            }
            std::cout << p << "\t" << part.word_index << "\t" << part.junction_id << "\t"
                      << ids << "\n";
        }
        if (!dc_dot.empty()) write_text_file(decomposition_dot(g, dec), dc_dot);
        return 0;
    }

    if (sy_cmd->parsed()) {
        Config cfg;
        cfg.load(sy_config);
        cfg.fill(sy_seed, "seed", sy_spec.seed);
        cfg.fill(sy_kind_opt, "kind", sy_kind);
        sy_spec.kind = toponym::synth_kind_from_string(sy_kind);
        toponym::save_skeleton(toponym::generate(sy_spec), sy_out);
        return 0;
    }

    if (xd_cmd->parsed()) {
        const auto j = toponym::read_json_file(xd_in);
        const bool reduced = j.contains("nodes") && j["nodes"].is_array() &&
                             !j["nodes"].empty() && j["nodes"].front().contains("role");
        const std::string dot = reduced
                                    ? toponym::reduced_to_dot(toponym::reduced_from_json(j))
                                    : toponym::skeleton_to_dot(toponym::skeleton_from_json(j));
        write_text_file(dot, xd_out);
        return 0;
    }

    if (pl_cmd->parsed()) {
        Config cfg;
        cfg.load(pl.config);
        cfg.fill(pl_tau, "tau", pl.cfg.tau);
        cfg.fill(pl_pl, "preserve_loops", pl.cfg.preserve_loops);
        cfg.fill(pl_sm, "smooth", pl.cfg.smooth_degree2);
        cfg.fill(pl_tr, "tau_relative", pl.cfg.tau_relative);
        cfg.fill(pl_type, "type", pl.type);
        cfg.fill(pl_seed, "seed", pl.seed);
        const auto type = toponym::object_type_from_string(pl.type);
        fs::create_directories(pl.out);
        struct Row {
            std::string object_id, name;
            std::size_t nodes = 0, edges = 0, cycle_rank = 0;
        };
        std::vector<Row> rows;
        for (const auto& path : json_files(pl.in)) {
            const auto skel = toponym::load_skeleton(path);
            const auto reduced = toponym::reduce_pipeline(skel, pl.cfg);
            toponym::save_reduced(reduced, fs::path(pl.out) / (path.stem().string() + ".reduced.json"));
            Row row;
            row.object_id = reduced.object_id;
            row.name = toponym::name_graph(reduced, type).text;
            row.nodes = reduced.nodes.size();
            row.edges = reduced.edges.size();
            row.cycle_rank = toponym::components_and_cycle_rank(reduced).cycle_rank;
            rows.push_back(std::move(row));
        }
        std::sort(rows.begin(), rows.end(),
                  [](const Row& a, const Row& b) { return a.object_id < b.object_id; });
        std::string manifest = "object_id\tname\tnodes\tedges\tcycle_rank\n";
        for (const auto& row : rows)
            manifest += row.object_id + "\t" + row.name + "\t" + std::to_string(row.nodes) +
                        "\t" + std::to_string(row.edges) + "\t" + std::to_string(row.cycle_rank) +
                        "\n";
        write_text_file(manifest, fs::path(pl.out) / "manifest.tsv");
        return 0;
    }

    return 2;  // unreachable: require_subcommand
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const toponym::NameParseError& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << " (at position "
                  << e.position() << ")\n";
        return 2;
    } catch (const toponym::ValidationError& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return 2;
    } catch (const toponym::IoError& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: filesystem: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: json: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
