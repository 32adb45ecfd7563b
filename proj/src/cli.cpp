#include "seer/cli.hpp"

#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "seer/audit.hpp"
#include "seer/bench.hpp"
#include "seer/engine.hpp"
#include "seer/error.hpp"
#include "seer/hex.hpp"

namespace seer {

namespace fs = std::filesystem;

namespace {

struct DestroyOptions {
    std::vector<std::string> paths;
    bool recursive = false;
    unsigned threads = 1;
    std::size_t chunk_size = 65536;
    bool no_fsync = false;
    bool dry_run = false;
    bool force = false;
    bool follow_symlinks = false;
    bool allow_dangerous = false;
    std::string output = "text";
    std::string report;
};

struct AuditOptions {
    std::vector<std::string> paths;
    std::string reference;
    double min_entropy = 7.9;
    double alpha = 0.001;
    std::size_t window = 16;
    std::string output = "text";
    std::string report;
};

struct BenchOptions {
    std::vector<std::string> methods = {"seer"};
    std::vector<std::uint64_t> counts = {100, 1000, 10000};
    std::vector<std::uint64_t> sizes = {1024};
    std::vector<std::string> classes = {"text", "image", "binary"};
    unsigned threads = 1;
    unsigned repetitions = 1;
    std::uint64_t seed = 1;
    bool no_fsync = false;
    std::string workdir;
    std::string format = "table";
    std::string csv;
};

EntropySource make_entropy(const CliContext& ctx) {
    if (ctx.test_mode) return EntropySource::deterministic(unsafe_test_mode, ctx.test_seed);
    return EntropySource::system();
}

bool same_device_as_parent(const fs::path& dir) {
    struct stat self{}, parent{};
    if (::stat(dir.c_str(), &self) != 0) return true;
    if (::stat((dir / "..").c_str(), &parent) != 0) return true;
    return self.st_dev == parent.st_dev && self.st_ino != parent.st_ino;
}

// Empty when the path is safe to destroy, otherwise the reason it is not.
std::string danger(const fs::path& path, const CliContext& ctx, bool recursive) {
    std::error_code ec;
    const auto st = fs::symlink_status(path, ec);
    if (ec || !fs::exists(st)) return {};
    const fs::path canon = fs::weakly_canonical(path, ec);
    if (ec) return {};

    if (fs::is_directory(st) && (canon == canon.root_path() || !same_device_as_parent(canon))) {
        return "is a filesystem root";
    }
    if (ctx.self_path.empty()) return {};
    const fs::path self = fs::weakly_canonical(ctx.self_path, ec);
    if (ec) return {};
    if (canon == self) return "is the seer executable";
    if (fs::is_directory(st)) {
        const fs::path rel = self.lexically_relative(canon);
        const bool inside = !rel.empty() && *rel.begin() != "..";
        if (inside && (recursive || rel.parent_path().empty())) return "contains the seer executable";
    }
    return {};
}

std::string format_ms(double ms) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << ms;
    return s.str();
}

int cmd_destroy(const DestroyOptions& opt, const CliContext& ctx) {
    std::ostream& out = *ctx.out;
    std::ostream& err = *ctx.err;

    ErasureConfig config;
    config.recursive = opt.recursive;
    config.threads = opt.threads;
    config.chunk_size = opt.chunk_size;
    config.fsync = !opt.no_fsync;
    config.dry_run = opt.dry_run;
    config.follow_symlinks = opt.follow_symlinks;
    try {
        config.validate();
    } catch (const Error& e) {
        err << "seer destroy: " << e.what() << '\n';
        return exit_usage;
    }

    if (!opt.allow_dangerous) {
        for (const auto& p : opt.paths) {
            const std::string why = danger(p, ctx, opt.recursive);
            if (!why.empty()) {
                err << "seer destroy: refusing " << p << ": " << why
                    << " (use --allow-dangerous-path to override)\n";
                return exit_usage;
            }
        }
    }

    if (!opt.force && !opt.dry_run) {
        std::size_t count = 0;
        for (const auto& p : opt.paths) {
            std::error_code ec;
            if (fs::is_directory(fs::symlink_status(p, ec))) {
                try {
                    count += collect_files(p, config).size();
                } catch (const Error&) {
                }
            } else {
                ++count;
            }
        }
        err << "About to irreversibly destroy " << count << " file(s). Type 'yes' to continue: ";
        err.flush();
        std::string answer;
        if (!ctx.in || !std::getline(*ctx.in, answer) || (answer != "yes" && answer != "y")) {
            err << "\nseer destroy: aborted, nothing was changed\n";
            return exit_usage;
        }
    }

    std::unique_ptr<std::ofstream> report_file;
    if (!opt.report.empty()) {
        report_file = std::make_unique<std::ofstream>(opt.report, std::ios::trunc);
        if (!*report_file) {
            err << "seer destroy: cannot open report file " << opt.report << '\n';
            return exit_usage;
        }
    }

    std::optional<EntropySource> entropy;
    try {
        entropy.emplace(make_entropy(ctx));
    } catch (const Error& e) {
        err << "seer destroy: " << e.what() << '\n';
        return exit_partial;
    }

    std::unique_ptr<std::ofstream> keylog;
    EngineHooks hooks;
    if (ctx.test_mode && ctx.test_keylog) {
        keylog = std::make_unique<std::ofstream>(*ctx.test_keylog, std::ios::app);
        hooks.after_derive = [&keylog](const SessionKeys& keys, const CipherIV& iv) {
            const SessionSnapshot snap = keys.snapshot(unsafe_test_mode);
            *keylog << to_hex(keys.u_publ()) << ' ' << to_hex(snap.cipher_key) << ' '
                    << to_hex(iv.bytes()) << '\n';
            keylog->flush();
        };
    }

    std::size_t destroyed = 0, skipped = 0, failed = 0;
    const ReportSink emit = [&](const ErasureReport& r) {
        switch (r.status) {
            case ErasureStatus::destroyed: ++destroyed; break;
            case ErasureStatus::skipped: ++skipped; break;
            case ErasureStatus::failed: ++failed; break;
        }
        const std::string line = to_json(r).dump();
        if (report_file) *report_file << line << '\n';
        if (opt.output == "json") {
            out << line << '\n';
        } else {
            out << to_string(r.status) << "  " << r.path.string();
            if (r.status == ErasureStatus::destroyed) {
                out << "  " << r.bytes_processed << " octets, " << format_ms(r.wall_time_ms) << " ms";
            }
            if (r.error) out << "  (" << *r.error << ')';
            out << '\n';
        }
        out.flush();
    };

    for (const auto& p : opt.paths) {
        std::error_code ec;
        const auto st = fs::symlink_status(p, ec);
        if (ec || !fs::exists(st)) {
            ErasureReport r;
            r.path = p;
            r.status = ErasureStatus::failed;
            r.error = "no such file or directory";
            emit(r);
            continue;
        }
        if (fs::is_directory(st)) {
            try {
                destroy_tree(p, config, *entropy, emit, keylog ? &hooks : nullptr);
            } catch (const Error& e) {
                ErasureReport r;
                r.path = p;
                r.error = e.what();
                emit(r);
            }
        } else {
            emit(destroy_file(p, config, *entropy, keylog ? &hooks : nullptr));
        }
    }

    if (opt.output != "json") {
        err << destroyed << " destroyed, " << skipped << " skipped, " << failed << " failed\n";
    }
    return failed == 0 ? exit_ok : exit_partial;
}

void print_verdict_text(std::ostream& out, const AuditVerdict& v, bool detailed) {
    out << v.path.string() << ": " << to_string(v.verdict);
    if (v.footer_error) out << " (" << *v.footer_error << ')';
    out << '\n';
    if (!detailed) return;
    out << "  footer        " << (v.footer_ok ? "ok" : "invalid") << '\n';
    out << "  header        " << (v.header_changed ? "changed" : "recognisable") << '\n';
    out << "  entropy       " << v.entropy_bits_per_octet << " bits/octet"
        << (v.statistics_enforced ? "" : " (advisory, small payload)") << '\n';
    out << "  chi-square p  " << v.chi_square_p << '\n';
    if (v.residue_hits) out << "  residue hits  " << *v.residue_hits << '\n';
}

int cmd_audit(const AuditOptions& opt, const CliContext& ctx, bool detailed) {
    std::ostream& out = *ctx.out;
    std::ostream& err = *ctx.err;
    const char* name = detailed ? "seer audit" : "seer verify";

    AuditThresholds thresholds;
    thresholds.min_entropy_bits = opt.min_entropy;
    thresholds.chi_square_alpha = opt.alpha;
    thresholds.residue_window = opt.window;

    std::optional<std::vector<std::uint8_t>> reference;
    if (!opt.reference.empty()) {
        std::ifstream in(opt.reference, std::ios::binary);
        if (!in) {
            err << name << ": cannot read reference " << opt.reference << '\n';
            return exit_usage;
        }
        reference.emplace((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }

    std::unique_ptr<std::ofstream> report_file;
    if (!opt.report.empty()) {
        report_file = std::make_unique<std::ofstream>(opt.report, std::ios::trunc);
        if (!*report_file) {
            err << name << ": cannot open report file " << opt.report << '\n';
            return exit_usage;
        }
    }

    bool all_destroyed = true;
    for (const auto& p : opt.paths) {
        nlohmann::json j;
        try {
            std::optional<std::span<const std::uint8_t>> ref;
            if (reference) ref = std::span<const std::uint8_t>(*reference);
            const AuditVerdict v = audit_file(p, ref, thresholds);
            if (v.verdict != Verdict::destroyed) all_destroyed = false;
            j = to_json(v);
            if (opt.output != "json") print_verdict_text(out, v, detailed);
        } catch (const Error& e) {
            all_destroyed = false;
            j = {{"path", p}, {"error", e.what()}, {"verdict", nullptr}};
            if (opt.output != "json") out << p << ": error (" << e.what() << ")\n";
        }
        if (opt.output == "json") out << j.dump() << '\n';
        if (report_file) *report_file << j.dump() << '\n';
    }
    return all_destroyed ? exit_ok : exit_partial;
}

int cmd_bench(const BenchOptions& opt, const CliContext& ctx) {
    std::ostream& out = *ctx.out;
    std::ostream& err = *ctx.err;

    std::vector<BenchSpec> specs;
    try {
        for (const auto& m : opt.methods) {
            for (const auto& c : opt.classes) {
                for (auto size : opt.sizes) {
                    for (auto count : opt.counts) {
                        BenchSpec spec;
                        spec.method = parse_method(m);
                        spec.content_class = parse_content_class(c);
                        spec.file_size = size;
                        spec.file_count = count;
                        spec.threads = opt.threads;
                        spec.repetitions = opt.repetitions;
                        spec.seed = opt.seed;
                        spec.fsync = !opt.no_fsync;
                        spec.validate();
                        specs.push_back(spec);
                    }
                }
            }
        }
    } catch (const Error& e) {
        err << "seer bench: " << e.what() << '\n';
        return exit_usage;
    }

    const fs::path workdir = opt.workdir.empty()
                                 ? fs::temp_directory_path() / ("seer-bench-" + std::to_string(::getpid()))
                                 : fs::path(opt.workdir);
    const bool own_workdir = opt.workdir.empty();

    std::vector<BenchResult> results;
    bool all_valid = true;
    try {
        for (const auto& spec : specs) {
            err << to_string(spec.method) << ' ' << to_string(spec.content_class) << ' '
                << spec.file_count << " x " << spec.file_size << " B ... ";
            err.flush();
            BenchResult r = run_bench(spec, workdir);
            err << r.total_seconds << " s" << (r.valid ? "" : " (invalid: " + r.error.value_or("") + ")")
                << '\n';
            all_valid = all_valid && r.valid;
            results.push_back(std::move(r));
        }
    } catch (const Error& e) {
        err << "\nseer bench: " << e.what() << '\n';
        if (own_workdir) fs::remove_all(workdir);
        return exit_partial;
    }
    if (own_workdir) fs::remove_all(workdir);

    if (opt.format == "csv") {
        out << render_csv(results);
    } else {
        out << render_table(results);
    }
    if (!opt.csv.empty()) {
        std::ofstream csv(opt.csv, std::ios::trunc);
        csv << render_csv(results);
        if (!csv) {
            err << "seer bench: cannot write " << opt.csv << '\n';
            return exit_partial;
        }
    }
    return all_valid ? exit_ok : exit_partial;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, const CliContext& context) {
    CliContext ctx = context;
    if (!ctx.out) ctx.out = &std::cout;
    if (!ctx.err) ctx.err = &std::cerr;

    CLI::App app{"seer: file destruction by in-place encryption and key erasure"};
    app.name("seer");
    app.require_subcommand(1);

    DestroyOptions destroy;
    auto* d = app.add_subcommand("destroy", "Encrypt files in place and erase the keys");
    d->add_option("paths", destroy.paths, "Files or directories")->required();
    d->add_flag("--recursive,-r", destroy.recursive, "Descend into directories");
    d->add_option("--threads", destroy.threads, "Worker threads")->check(CLI::PositiveNumber);
    d->add_option("--chunk-size", destroy.chunk_size, "I/O chunk size in octets");
    d->add_flag("--no-fsync", destroy.no_fsync, "Skip durability syncs");
    d->add_flag("--dry-run", destroy.dry_run, "List what would be destroyed");
    d->add_flag("--force,-f", destroy.force, "Do not ask for confirmation");
    d->add_flag("--follow-symlinks", destroy.follow_symlinks, "Destroy symlink targets");
    d->add_flag("--allow-dangerous-path", destroy.allow_dangerous,
                "Permit filesystem roots and the seer executable");
    d->add_option("--output", destroy.output, "text or json")->check(CLI::IsMember({"text", "json"}));
    d->add_option("--report", destroy.report, "Also write JSON lines to FILE");

    AuditOptions verify;
    auto* v = app.add_subcommand("verify", "Check that files were destroyed (read-only)");
    v->add_option("paths", verify.paths, "Files")->required();
    v->add_option("--output", verify.output, "text or json")->check(CLI::IsMember({"text", "json"}));
    v->add_option("--report", verify.report, "Also write JSON lines to FILE");

    AuditOptions audit;
    auto* a = app.add_subcommand("audit", "Detailed irrecoverability audit (read-only)");
    a->add_option("paths", audit.paths, "Files")->required();
    a->add_option("--reference", audit.reference, "Original plaintext for residue search");
    a->add_option("--min-entropy", audit.min_entropy, "Entropy threshold, bits per octet")
        ->check(CLI::Range(0.0, 8.0));
    a->add_option("--alpha", audit.alpha, "Chi-square significance level")->check(CLI::Range(0.0, 1.0));
    a->add_option("--window", audit.window, "Residue window in octets")->check(CLI::Range(8, 1 << 20));
    a->add_option("--output", audit.output, "text or json")->check(CLI::IsMember({"text", "json"}));
    a->add_option("--report", audit.report, "Also write JSON lines to FILE");

    BenchOptions bench;
    auto* b = app.add_subcommand("bench", "Time destruction methods over generated corpora");
    b->add_option("--method", bench.methods, "seer, single, dod3, gutmann")->delimiter(',');
    b->add_option("--count", bench.counts, "Files per corpus")->delimiter(',')->check(CLI::PositiveNumber);
    b->add_option("--size", bench.sizes, "File size in octets")->delimiter(',')->check(CLI::PositiveNumber);
    b->add_option("--class", bench.classes, "text, image, binary")->delimiter(',');
    b->add_option("--threads", bench.threads, "Worker threads")->check(CLI::PositiveNumber);
    b->add_option("--repetitions", bench.repetitions, "Repetitions per cell")->check(CLI::PositiveNumber);
    b->add_option("--seed", bench.seed, "Corpus seed");
    b->add_flag("--no-fsync", bench.no_fsync, "Skip durability syncs");
    b->add_option("--workdir", bench.workdir, "Scratch directory for corpora");
    b->add_option("--format", bench.format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
    b->add_option("--csv", bench.csv, "Also write CSV to FILE");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, *ctx.out, *ctx.err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (d->parsed()) return cmd_destroy(destroy, ctx);
        if (v->parsed()) return cmd_audit(verify, ctx, false);
        if (a->parsed()) return cmd_audit(audit, ctx, true);
        if (b->parsed()) return cmd_bench(bench, ctx);
    } catch (const std::exception& e) {
        *ctx.err << "seer: " << e.what() << '\n';
        return exit_partial;
    }
    return exit_usage;
}

}  // namespace seer
