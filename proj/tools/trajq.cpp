#include "traj/factory.hpp"
#include "traj/ingest.hpp"
#include "traj/pipeline.hpp"
#include "traj/query.hpp"
#include "traj/reference.hpp"
#include "traj/text.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace traj;

const char* kUsage = R"(usage: trajq <subcommand> [args] [<subcommand> [args] ...]

subcommands:
  load-points <file>        ingest points CSV (object_id,t,x,y,device_id)
  load-regions <file>       ingest regions (one JSON record per line)
  load-devices <file>       ingest devices CSV (device_id,kind,reliability,description)
  load-activities <file>    ingest activities CSV (id,object_id,kind,label,t_begin,t_end,x,y)
  load-observations <file>  ingest observations CSV (id,event_id,feature,value,unit,t)
  segment --eps <meters> --tau <seconds> [--object <id>]
  annotate
  index [--cell-size <meters>] [--time-bucket <seconds>]
  query "<dsl>"
  export --kind <raw|structured|semantic|roi|stpath> --object <id>
  save <file>
  load <file>

Subcommands run left to right against one in-memory store; use save/load to
carry the store across invocations.
)";

class Args {
public:
    Args(int argc, char** argv) {
        for (int i = 1; i < argc; ++i) tokens_.emplace_back(argv[i]);
    }

    bool done() const { return pos_ >= tokens_.size(); }

    std::string next(const std::string& what) {
        if (done()) throw ArgumentError("missing " + what);
        return tokens_[pos_++];
    }

    /// Consumes `--name value` / `--name=value` flags until a non-flag token.
    std::map<std::string, std::string> flags(const std::vector<std::string>& known) {
        std::map<std::string, std::string> out;
        while (!done() && tokens_[pos_].rfind("--", 0) == 0) {
            std::string name = tokens_[pos_++];
            std::string value;
            const std::size_t eq = name.find('=');
            if (eq != std::string::npos) {
                value = name.substr(eq + 1);
                name = name.substr(0, eq);
            } else {
                if (done()) throw ArgumentError("flag " + name + " needs a value");
                value = tokens_[pos_++];
            }
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                throw ArgumentError("unknown flag " + name);
            }
            out[name] = value;
        }
        return out;
    }

private:
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
};

double parse_flag_double(const std::map<std::string, std::string>& flags, const std::string& name,
                         std::optional<double> fallback = std::nullopt) {
    auto it = flags.find(name);
    if (it == flags.end()) {
        if (fallback) return *fallback;
        throw ArgumentError("required flag " + name + " is missing");
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("flag " + name + " needs a numeric value, got '" + it->second + "'");
    }
}

std::int64_t parse_flag_i64(const std::map<std::string, std::string>& flags,
                            const std::string& name,
                            std::optional<std::int64_t> fallback = std::nullopt) {
    auto it = flags.find(name);
    if (it == flags.end()) {
        if (fallback) return *fallback;
        throw ArgumentError("required flag " + name + " is missing");
    }
    try {
        std::size_t used = 0;
        const long long v = std::stoll(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("flag " + name + " needs an integer value, got '" + it->second + "'");
    }
}

ResultTable export_raw(const TrajectoryStore& store, const std::string& object) {
    const RawTrajectory raw = store.raw_trajectory(object);
    ResultTable t;
    t.columns = {"object", "t", "x", "y"};
    for (const RawPoint& p : raw.points) {
        t.rows.push_back({object, p.t.t, p.p.x, p.p.y});
    }
    return t;
}

void episode_rows(ResultTable& t, const StructuredTrajectory& st,
                  const SemanticTrajectory* sem) {
    auto event_row = [&](const SpaceTimeEvent& e, const char* kind) {
        const GeoPoint p = e.spatial.representative_point();
        std::vector<Value> row{st.object_id, std::string(kind), e.time.begin.t, e.time.end.t,
                               e.time.duration(), p.x, p.y};
        if (sem) {
            row.emplace_back(e.semantic ? e.semantic->place_name : std::string());
            row.emplace_back(e.semantic ? e.semantic->category : std::string());
            row.emplace_back(std::string(kind));
        }
        t.rows.push_back(std::move(row));
    };
    event_row(st.begin, "begin");
    for (std::size_t k = 0; k < st.episodes.size(); ++k) {
        const Episode& ep = st.episodes[k];
        const GeoPoint p = ep.geometry.representative_point();
        std::vector<Value> row{st.object_id, std::string(to_string(ep.kind)), ep.time.begin.t,
                               ep.time.end.t, ep.time.duration(), p.x, p.y};
        if (sem) {
            const auto& ann = sem->annotations[k];
            row.emplace_back(ann ? ann->place_name : std::string());
            row.emplace_back(ann ? ann->category : std::string());
            row.emplace_back(std::string(to_string(episode_role(st, k))));
        }
        t.rows.push_back(std::move(row));
    }
    event_row(st.end, "end");
}

ResultTable export_structured(const TrajectoryStore& store, const std::string& object) {
    auto it = store.structured().find(object);
    if (it == store.structured().end()) {
        throw ArgumentError("no structured trajectory for " + object + "; run `segment` first");
    }
    ResultTable t;
    t.columns = {"object", "kind", "t_begin", "t_end", "duration", "x", "y"};
    episode_rows(t, it->second, nullptr);
    return t;
}

ResultTable export_semantic(const TrajectoryStore& store, const std::string& object) {
    auto it = store.semantic().find(object);
    if (it == store.semantic().end()) {
        throw ArgumentError("no semantic trajectory for " + object + "; run `annotate` first");
    }
    ResultTable t;
    t.columns = {"object", "kind",  "t_begin",  "t_end", "duration",
                 "x",      "y",     "place",    "category", "role"};
    episode_rows(t, it->second.base, &it->second);
    return t;
}

ResultTable export_roi(const TrajectoryStore& store, const std::string& object) {
    auto it = store.semantic().find(object);
    if (it == store.semantic().end()) {
        throw ArgumentError("no semantic trajectory for " + object + "; run `annotate` first");
    }
    ResultTable t;
    t.columns = {"object", "region", "category", "t_begin", "t_end", "via_descendant"};
    for (const Visit& v : visits(it->second, store.forest())) {
        const ObjectOfInterest& r = store.forest().region(v.region_id);
        t.rows.push_back({object, r.name, r.category, v.time.begin.t, v.time.end.t,
                          v.via_descendant});
    }
    return t;
}

ResultTable export_stpath(const TrajectoryStore& store, const std::string& object) {
    const SpaceTimePath path = store.build_path(object);
    ResultTable t;
    t.columns = {"object", "event", "t_begin", "t_end", "activity_kind", "label", "x", "y"};
    for (const PathEntry& entry : path.entries) {
        const GeoPoint rep = entry.event.spatial.representative_point();
        std::map<std::string, const Activity*> acts;
        for (const Activity& a : entry.begin_activities) acts.emplace(a.id, &a);
        for (const Activity& a : entry.end_activities) acts.emplace(a.id, &a);
        if (acts.empty()) {
            t.rows.push_back({object, entry.event.id, entry.event.time.begin.t,
                              entry.event.time.end.t, std::string(), std::string(), rep.x, rep.y});
            continue;
        }
        for (const auto& [aid, a] : acts) {
            const GeoPoint at = a->location ? *a->location : rep;
            t.rows.push_back({object, entry.event.id, a->time.begin.t, a->time.end.t,
                              std::string(to_string(a->kind)), a->label, at.x, at.y});
        }
    }
    return t;
}

int run(int argc, char** argv) {
    Args args(argc, argv);
    if (args.done()) {
        std::cerr << kUsage;
        return 1;
    }

    TrajectoryStore store;
    while (!args.done()) {
        const std::string cmd = args.next("subcommand");

        if (cmd == "load-points" || cmd == "load-regions" || cmd == "load-devices"
            || cmd == "load-activities" || cmd == "load-observations") {
            const std::string file = args.next("file path after " + cmd);
            IngestKind kind = IngestKind::Points;
            if (cmd == "load-regions") kind = IngestKind::Regions;
            else if (cmd == "load-devices") kind = IngestKind::Devices;
            else if (cmd == "load-activities") kind = IngestKind::Activities;
            else if (cmd == "load-observations") kind = IngestKind::Observations;
            const IngestReport report = load_file(kind, file, store);
            std::cout << report.summary() << "\n";
        } else if (cmd == "segment") {
            auto flags = args.flags({"--eps", "--tau", "--object"});
            const double eps = parse_flag_double(flags, "--eps");
            const std::int64_t tau = parse_flag_i64(flags, "--tau");
            std::optional<std::string> object;
            if (flags.count("--object")) object = flags["--object"];
            const std::size_t n = run_segmentation(store, SegmentationParams(eps, tau), object);
            std::cout << "segmented " << n << (n == 1 ? " object\n" : " objects\n");
        } else if (cmd == "annotate") {
            const std::size_t n = run_annotation(store);
            std::cout << "annotated " << n << (n == 1 ? " object\n" : " objects\n");
        } else if (cmd == "index") {
            auto flags = args.flags({"--cell-size", "--time-bucket"});
            const double cell = parse_flag_double(flags, "--cell-size", 100.0);
            const std::int64_t bucket = parse_flag_i64(flags, "--time-bucket", 3600);
            auto idx = store.build_index(cell, bucket);
            std::cout << "indexed " << store.events().size() << " events into "
                      << idx->buckets.size() << " buckets\n";
        } else if (cmd == "query") {
            const std::string text = args.next("query string");
            const QueryAst ast = parse(text);
            std::cout << evaluate(ast, store).to_tsv();
        } else if (cmd == "export") {
            auto flags = args.flags({"--kind", "--object"});
            if (!flags.count("--kind")) throw ArgumentError("export needs --kind");
            if (!flags.count("--object")) throw ArgumentError("export needs --object");
            const PresentationKind kind = presentation_kind_from_string(flags["--kind"]);
            const std::string& object = flags["--object"];
            ResultTable table;
            switch (kind) {
            case PresentationKind::Raw: table = export_raw(store, object); break;
            case PresentationKind::Structured: table = export_structured(store, object); break;
            case PresentationKind::Semantic: table = export_semantic(store, object); break;
            case PresentationKind::Roi: table = export_roi(store, object); break;
            case PresentationKind::SpaceTimePath: table = export_stpath(store, object); break;
            }
            std::cout << table.to_tsv();
        } else if (cmd == "save") {
            const std::string file = args.next("snapshot path after save");
            store.save_snapshot(file);
            std::cout << "saved snapshot " << file << "\n";
        } else if (cmd == "load") {
            const std::string file = args.next("snapshot path after load");
            store = TrajectoryStore::load_snapshot(file);
            std::cout << "loaded snapshot " << file << " (revision " << store.revision() << ")\n";
        } else if (cmd == "--help" || cmd == "help") {
            std::cout << kUsage;
        } else {
            std::cerr << "unknown subcommand: " << cmd << "\n" << kUsage;
            return 1;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const traj::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
