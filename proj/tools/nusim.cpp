#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nusim/nusim.hpp"

namespace {

using namespace nusim;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> split_csv(const std::string& csv)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t comma = csv.find(',', start);
        if (comma == std::string::npos) comma = csv.size();
        std::string item = csv.substr(start, comma - start);
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == csv.size()) break;
        start = comma + 1;
    }
    return out;
}

// Shared --lts/--names/--declare handling for every LTS-consuming command.
struct LtsInput {
    std::string path;
    std::string names_path;
    std::string declare_csv;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--lts", path, "transition system in .aut format")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--names", names_path, "sidecar file with '<id> <name>' lines")
            ->check(CLI::ExistingFile);
        cmd->add_option("--declare", declare_csv,
                        "extra action labels (csv) to add to the alphabet");
    }

    Lts load() const
    {
        Lts lts = parse_aut(read_file(path), split_csv(declare_csv));
        if (!names_path.empty())
            lts = lts.with_display_names(parse_names(read_file(names_path),
                                                     lts.num_processes()));
        return lts;
    }
};

RelationKind parse_kind(const std::string& text)
{
    if (auto kind = RelationKind::parse(text)) return *kind;
    throw std::invalid_argument("unknown relation kind '" + text +
                                "' (expected sim|opsim|bisim|simeq|nsim:N|nopsim:N, N >= 1)");
}

std::vector<RelationKind> parse_kinds(const std::string& csv)
{
    std::vector<RelationKind> kinds;
    for (const std::string& item : split_csv(csv)) kinds.push_back(parse_kind(item));
    if (kinds.empty()) throw std::invalid_argument("--kinds lists no kinds");
    return kinds;
}

ProcessId resolve_process(const Lts& lts, const std::string& token)
{
    if (!token.empty()) {
        bool numeric = true;
        for (char c : token)
            if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
        if (numeric) {
            const unsigned long long id = std::stoull(token);
            if (id >= lts.num_processes())
                throw std::invalid_argument("process id " + token + " out of range");
            return static_cast<ProcessId>(id);
        }
    }
    if (auto p = lts.process_by_name(token)) return *p;
    throw std::invalid_argument("unknown process '" + token + "'");
}

std::string process_set_line(const Lts& lts, const Bitset& set)
{
    std::string line;
    for (ProcessId q : set.elements()) {
        if (!line.empty()) line += " ";
        line += detail::process_text(&lts, q);
    }
    return line;
}

int run_check(const LtsInput& input, const std::string& kind_text, const std::string& pair_text)
{
    const Lts lts = input.load();
    const RelationKind kind = parse_kind(kind_text);
    const std::size_t comma = pair_text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--pair expects '<p>,<q>'");
    const ProcessId p = resolve_process(lts, pair_text.substr(0, comma));
    const ProcessId q = resolve_process(lts, pair_text.substr(comma + 1));
    const bool related = preorder(kind, lts).contains(p, q);
    std::cout << (related ? "yes" : "no") << "\n";
    return related ? 0 : 1;
}

int run_relation(const LtsInput& input, const std::string& kind_text, const std::string& format)
{
    const Lts lts = input.load();
    const Relation rel = preorder(parse_kind(kind_text), lts);
    if (format == "pairs")
        std::cout << render_pairs(rel, &lts);
    else if (format == "summary")
        std::cout << render_summary(rel, &lts);
    else
        throw std::invalid_argument("--format must be 'pairs' or 'summary'");
    return 0;
}

int run_charformula(const LtsInput& input, const std::string& kind_text,
                    const std::optional<std::string>& process,
                    const std::optional<std::size_t>& unfold_depth)
{
    const Lts lts = input.load();
    const CharSystem cs = char_system(parse_kind(kind_text), lts);
    std::cout << render_declaration_file(cs.system, cs.target_level);
    if (process) {
        const ProcessId p = resolve_process(lts, *process);
        const ConstName target{cs.target_level, p};
        std::cout << "target: " << target.to_string() << "\n";
        if (unfold_depth)
            std::cout << "unfold " << *unfold_depth << ": "
                      << unfold(cs, target, *unfold_depth).to_string() << "\n";
    } else if (unfold_depth) {
        throw std::invalid_argument("--unfold requires --process");
    }
    return 0;
}

int run_mc(const LtsInput& input, const std::string& formula_arg, const std::string& decls_path)
{
    const Lts lts = input.load();
    const std::string formula_text =
        formula_arg.starts_with("@") ? read_file(formula_arg.substr(1)) : formula_arg;
    const Formula formula = parse_formula(formula_text);
    ConstantEnv env;
    if (!decls_path.empty()) {
        const DeclarationFile file = parse_declaration_file(read_file(decls_path));
        env = elaborate(file.system, lts);
    }
    std::cout << process_set_line(lts, eval_closed(formula, lts, env)) << "\n";
    return 0;
}

int run_verify(const std::string& lts_path, const std::string& names_path,
               const std::string& declare_csv, std::size_t random_count,
               std::size_t max_states, const std::string& actions_csv, double density,
               const std::string& kinds_csv, std::size_t samples, std::uint64_t seed)
{
    if ((lts_path.empty()) == (random_count == 0))
        throw std::invalid_argument("give exactly one of --lts or --random");

    VerifyOptions options;
    if (!kinds_csv.empty()) options.kinds = parse_kinds(kinds_csv);
    options.samples = samples;
    options.seed = seed;

    if (!lts_path.empty()) {
        LtsInput input{lts_path, names_path, declare_csv};
        const Lts lts = input.load();
        const VerifyReport report = verify_lts(lts, options);
        std::cout << report.to_text();
        for (const RelationKind& kind : options.kinds) {
            std::cout << "kind " << kind.to_string() << ":\n";
            std::cout << render_summary(preorder(kind, lts), &lts);
        }
        return report.all_passed() ? 0 : 1;
    }

    const std::vector<std::string> actions = split_csv(actions_csv);
    const std::vector<Lts> corpus =
        make_random_corpus(random_count, max_states, actions, {density}, seed);
    const VerifyReport report = verify_corpus(corpus, options);
    std::cout << report.to_text();
    return report.all_passed() ? 0 : 1;
}

int run_gen(std::size_t states, const std::string& actions_csv, double density,
            std::uint64_t seed, const std::string& out_path)
{
    const Lts lts = generate_random(states, split_csv(actions_csv), density, seed);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << render_aut(lts);
    if (!out.flush()) throw std::runtime_error("cannot write '" + out_path + "'");
    std::cout << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"behavioural preorders on labelled transition systems, computed two ways"};
    app.require_subcommand(1);

    // check
    auto* check_cmd = app.add_subcommand("check", "decide whether a pair is in a preorder");
    LtsInput check_input;
    check_input.attach(check_cmd);
    std::string check_kind;
    std::string check_pair;
    check_cmd->add_option("--kind", check_kind, "relation kind")->required();
    check_cmd->add_option("--pair", check_pair, "pair '<p>,<q>' of ids or names")->required();

    // relation
    auto* relation_cmd = app.add_subcommand("relation", "print a full preorder relation");
    LtsInput relation_input;
    relation_input.attach(relation_cmd);
    std::string relation_kind;
    std::string relation_format = "pairs";
    relation_cmd->add_option("--kind", relation_kind, "relation kind")->required();
    relation_cmd->add_option("--format", relation_format, "pairs|summary (default pairs)");

    // charformula
    auto* char_cmd =
        app.add_subcommand("charformula", "print the characteristic equation system");
    LtsInput char_input;
    char_input.attach(char_cmd);
    std::string char_kind;
    std::optional<std::string> char_process;
    std::optional<std::size_t> char_unfold;
    char_cmd->add_option("--kind", char_kind, "relation kind")->required();
    char_cmd->add_option("--process", char_process, "process whose target constant to name");
    char_cmd->add_option("--unfold", char_unfold, "depth to unfold the target constant");

    // mc
    auto* mc_cmd = app.add_subcommand("mc", "model-check a formula, print satisfying processes");
    LtsInput mc_input;
    mc_input.attach(mc_cmd);
    std::string mc_formula;
    std::string mc_decls;
    mc_cmd->add_option("--formula", mc_formula, "formula text, or @path to read a file")
        ->required();
    mc_cmd->add_option("--decls", mc_decls, "declaration file binding nu<L>:<i> constants")
        ->check(CLI::ExistingFile);

    // verify
    auto* verify_cmd =
        app.add_subcommand("verify", "cross-check the relational and logical routes");
    std::string verify_lts_path;
    std::string verify_names;
    std::string verify_declare;
    std::size_t verify_random = 0;
    std::size_t verify_max_states = 8;
    std::string verify_actions = "a,b";
    double verify_density = 0.3;
    std::string verify_kinds;
    std::size_t verify_samples = 50;
    std::uint64_t verify_seed = 0;
    verify_cmd->add_option("--lts", verify_lts_path, "transition system in .aut format")
        ->check(CLI::ExistingFile);
    verify_cmd->add_option("--names", verify_names, "sidecar file with '<id> <name>' lines")
        ->check(CLI::ExistingFile);
    verify_cmd->add_option("--declare", verify_declare, "extra action labels (csv)");
    verify_cmd->add_option("--random", verify_random, "verify this many generated systems");
    verify_cmd->add_option("--max-states", verify_max_states, "max states per generated system");
    verify_cmd->add_option("--actions", verify_actions, "alphabet for generated systems (csv)");
    verify_cmd->add_option("--density", verify_density, "transition density in [0,1]");
    verify_cmd->add_option("--kinds", verify_kinds, "relation kinds to check (csv)");
    verify_cmd->add_option("--samples", verify_samples, "random samples per property");
    verify_cmd->add_option("--seed", verify_seed, "random seed");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate a random .aut transition system");
    std::size_t gen_states = 0;
    std::string gen_actions;
    double gen_density = 0.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen_cmd->add_option("--states", gen_states, "number of states")->required();
    gen_cmd->add_option("--actions", gen_actions, "alphabet (csv)")->required();
    gen_cmd->add_option("--density", gen_density, "transition density in [0,1]")->required();
    gen_cmd->add_option("--seed", gen_seed, "random seed")->required();
    gen_cmd->add_option("--out", gen_out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*check_cmd) return run_check(check_input, check_kind, check_pair);
        if (*relation_cmd) return run_relation(relation_input, relation_kind, relation_format);
        if (*char_cmd) return run_charformula(char_input, char_kind, char_process, char_unfold);
        if (*mc_cmd) return run_mc(mc_input, mc_formula, mc_decls);
        if (*verify_cmd)
            return run_verify(verify_lts_path, verify_names, verify_declare, verify_random,
                              verify_max_states, verify_actions, verify_density, verify_kinds,
                              verify_samples, verify_seed);
        if (*gen_cmd) return run_gen(gen_states, gen_actions, gen_density, gen_seed, gen_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
