// Copyright 2026 The xlrep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xlrep/align_losses.h"
#include "xlrep/embedding_align.h"
#include "xlrep/errors.h"
#include "xlrep/io.h"
#include "xlrep/overlap_stats.h"
#include "xlrep/param_interp.h"
#include "xlrep/projection.h"
#include "xlrep/repr_similarity.h"
#include "xlrep/rng.h"
#include "xlrep/synthesis.h"

namespace xlrep::cli {
namespace {

using Json = nlohmann::ordered_json;
using Path = std::string;

template <typename Reader>
auto Load(const Path &path, Reader reader) {
  std::istringstream in(io::ReadFile(path));
  return reader(in);
}

template <typename Writer>
void Save(const Path &path, Writer writer) {
  std::ostringstream buf;
  writer(buf);
  io::WriteFile(path, buf.str());
}

EmbeddingSpace LoadVec(const Path &p) {
  return Load(p, [](std::istream &in) { return io::ReadVec(in); });
}
ParamVector LoadPvec(const Path &p) {
  return Load(p, [](std::istream &in) { return io::ReadPvec(in); });
}
std::vector<LinkSet> LoadPharaoh(const Path &p) {
  return Load(p, [](std::istream &in) { return io::ReadPharaoh(in); });
}
std::vector<AnnotatedSentence> LoadConllu(const Path &p) {
  return Load(p, [](std::istream &in) { return io::ReadConllu(in); });
}
std::vector<AnnotatedSentence> LoadBio(const Path &p) {
  return Load(p, [](std::istream &in) { return io::ReadBio(in); });
}
synthesis::Corpus LoadTokenized(const Path &p) {
  return Load(p, [](std::istream &in) { return io::ReadTokenized(in); });
}
std::vector<std::pair<std::string, std::string>> LoadPairs(const Path &p) {
  return Load(p, [](std::istream &in) { return io::ReadWordPairs(in); });
}
std::vector<double> LoadNumbers(const Path &p) {
  return Load(p, [](std::istream &in) { return io::ReadNumbers(in); });
}

void SavePvec(const Path &p, const ParamVector &params) {
  Save(p, [&](std::ostream &out) { io::WritePvec(out, params); });
}

// Matrix rows from a .vec file, or from the 2-D entries of a .pvec file.
Eigen::MatrixXd LoadRows(const Path &p) {
  if (std::filesystem::path(p).extension() == ".pvec") {
    return similarity::RowsOf(LoadPvec(p));
  }
  return similarity::RowsOf(LoadVec(p));
}

// Re-expresses every alignment of sentence k with the same lengths.
std::vector<std::vector<LinkSet>> UnifyLengths(
    std::vector<std::vector<LinkSet>> files) {
  const std::size_t n = files.front().size();
  for (const auto &f : files) {
    if (f.size() != n) {
      throw ValidationError("alignment files have different sentence counts");
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    int src = 0;
    int tgt = 0;
    for (const auto &f : files) {
      src = std::max(src, f[k].source_length());
      tgt = std::max(tgt, f[k].target_length());
    }
    for (auto &f : files) {
      LinkSet resized(src, tgt);
      for (const Link &l : f[k].links()) resized.Add(l);
      f[k] = std::move(resized);
    }
  }
  return files;
}

// Alignment k widened to the given sentence lengths.
LinkSet Widen(const LinkSet &links, int src, int tgt) {
  if (links.source_length() > src || links.target_length() > tgt) {
    throw ValidationError("alignment index beyond sentence length");
  }
  LinkSet out(src, tgt);
  for (const Link &l : links.links()) out.Add(l);
  return out;
}

void CheckSameCount(std::size_t a, std::size_t b, const char *what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": " + std::to_string(a) +
                          " vs " + std::to_string(b) + " sentences");
  }
}

std::vector<projection::Span> SpansOf(const std::vector<std::string> &bio) {
  if (!projection::IsValidBio(bio)) {
    throw ValidationError("source labels are not valid BIO");
  }
  return projection::SpansFromBio(bio);
}

Json Num(double v) { return Round10(v); }

// Subcommand with its options and the action that runs when it was parsed.
struct Command {
  CLI::App *app;
  std::function<Json()> run;
};

class Cli {
 public:
  Cli() : app_("Cross-lingual representation toolkit", "xlrep") {
    app_.require_subcommand(1);
    app_.set_help_all_flag("--help-all", "Expand all subcommand help");
    AddAlign();
    AddRetrieve();
    AddEvalPrecision();
    AddCka();
    AddLoss();
    AddGradCheck();
    AddSymmetrize();
    AddProject();
    AddRepairBio();
    AddEvalAlign();
    AddCodeSwitch();
    AddMask();
    AddCombine();
    AddInterp();
    AddDeltaStats();
    AddOverlap();
    AddPearson();
  }

  int Run(const std::vector<std::string> &args, std::ostream &out,
          std::ostream &err) {
    std::vector<const char *> argv{"xlrep"};
    for (const std::string &a : args) argv.push_back(a.c_str());
    try {
      app_.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
      out << Deepest(&app_)->help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
      out << app_.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError &e) {
      err << "error: " << e.what() << "\n\n" << Deepest(&app_)->help();
      return kExitUsage;
    }
    for (const Command &c : commands_) {
      if (!c.app->parsed()) continue;
      try {
        out << c.run().dump() << '\n';
        return kExitOk;
      } catch (const IoError &e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
      } catch (const std::filesystem::filesystem_error &e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
      } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
      }
    }
    err << Deepest(&app_)->help();
    return kExitUsage;
  }

 private:
  static CLI::App *Deepest(CLI::App *app) {
    for (CLI::App *sub : app->get_subcommands()) return Deepest(sub);
    return app;
  }

  CLI::App *Sub(CLI::App *parent, const std::string &name,
                const std::string &description, std::function<Json()> run) {
    CLI::App *sub = parent->add_subcommand(name, description);
    commands_.push_back({sub, std::move(run)});
    return sub;
  }

  CLI::App *Group(const std::string &name, const std::string &description) {
    CLI::App *group = app_.add_subcommand(name, description);
    group->require_subcommand(1);
    return group;
  }

  void AddAlign() {
    CLI::App *group =
        Group("align", "Fit an orthogonal map between two embedding spaces");
    for (const std::string method : {"procrustes", "gd"}) {
      struct Opts {
        Path src, tgt, pairs, out, mapped;
        bool normalize = false;
        align::GradientFitOptions gd;
      };
      auto o = std::make_shared<Opts>();
      CLI::App *sub = Sub(
          group, method,
          method == "gd" ? "Gradient descent with orthogonality retraction"
                         : "Closed-form SVD solution",
          [o, method]() {
            EmbeddingSpace src = LoadVec(o->src);
            EmbeddingSpace tgt = LoadVec(o->tgt);
            if (o->normalize) {
              src = align::IterativeNormalize(src);
              tgt = align::IterativeNormalize(tgt);
            }
            std::size_t skipped = 0;
            const auto pairs =
                align::ResolvePairs(src, tgt, LoadPairs(o->pairs), &skipped);
            align::OrthogonalMap map;
            Json summary;
            summary["method"] = method;
            if (method == "gd") {
              auto fit = align::GradientOrthogonalFit(src, tgt, pairs, o->gd);
              map = fit.map;
              summary["steps"] = o->gd.steps;
              summary["polish_steps"] = fit.polish_steps;
            } else {
              map = align::ProcrustesFit(src, tgt, pairs);
            }
            Eigen::MatrixXd x(src.dimension(), pairs.size());
            Eigen::MatrixXd y(tgt.dimension(), pairs.size());
            for (std::size_t k = 0; k < pairs.size(); ++k) {
              x.col(k) = src.vectors().col(pairs[k].first);
              y.col(k) = tgt.vectors().col(pairs[k].second);
            }
            const Eigen::Index d = map.matrix.rows();
            ParamVector w;
            std::vector<double> data(d * d);
            for (Eigen::Index i = 0; i < d; ++i) {
              for (Eigen::Index j = 0; j < d; ++j) {
                data[i * d + j] = map.matrix(i, j);
              }
            }
            w.Add("W", {d, d}, std::move(data));
            SavePvec(o->out, w);
            if (!o->mapped.empty()) {
              const EmbeddingSpace mapped = map.Apply(src);
              Save(o->mapped,
                   [&](std::ostream &out) { io::WriteVec(out, mapped); });
            }
            summary["pairs"] = pairs.size();
            summary["skipped"] = skipped;
            summary["objective"] = Num(
                align::AlignmentObjective(map.matrix, x, y) / pairs.size());
            summary["orthogonality_error"] = Num(map.OrthogonalityError());
            return summary;
          });
      sub->add_option("--src", o->src, "Source embeddings (.vec)")->required();
      sub->add_option("--tgt", o->tgt, "Target embeddings (.vec)")->required();
      sub->add_option("--pairs", o->pairs, "Supervision pairs (src<TAB>tgt)")
          ->required();
      sub->add_option("--out", o->out, "Output map W as a PVEC entry 'W'")
          ->required();
      sub->add_option("--mapped", o->mapped, "Also write W X as a .vec file");
      sub->add_flag("--normalize", o->normalize,
                    "Iteratively length-normalize and center both spaces");
      if (method == "gd") {
        sub->add_option("--lr", o->gd.learning_rate, "Learning rate")
            ->capture_default_str();
        sub->add_option("--steps", o->gd.steps, "Gradient steps")
            ->capture_default_str();
        sub->add_option("--beta", o->gd.beta,
                        "Retraction strength; 0.01 is the orthogonality "
                        "update strength of the MUSE alignment recipe")
            ->capture_default_str();
      }
    }
  }

  void AddRetrieve() {
    struct Opts {
      Path src, tgt, out;
      int k = 10;
      int top = 10;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(&app_, "retrieve", "CSLS translation retrieval", [o]() {
      const EmbeddingSpace src = LoadVec(o->src);
      const EmbeddingSpace tgt = LoadVec(o->tgt);
      const auto ranked = align::CslsRetrieve(src, tgt, o->k, o->top);
      Save(o->out, [&](std::ostream &out) {
        for (std::size_t i = 0; i < ranked.size(); ++i) {
          out << src.items()[i];
          for (Eigen::Index j : ranked[i]) out << '\t' << tgt.items()[j];
          out << '\n';
        }
      });
      Json summary;
      summary["sources"] = ranked.size();
      summary["k"] = o->k;
      summary["top"] = o->top;
      return summary;
    });
    sub->add_option("--src", o->src, "Mapped source embeddings (.vec)")
        ->required();
    sub->add_option("--tgt", o->tgt, "Target embeddings (.vec)")->required();
    sub->add_option("--out", o->out, "Ranked targets per source (TSV)")
        ->required();
    sub->add_option("--k", o->k,
                    "CSLS neighborhood size; 10 as in the CSLS retrieval "
                    "criterion")
        ->capture_default_str();
    sub->add_option("--top", o->top, "Targets listed per source")
        ->capture_default_str();
  }

  void AddEvalPrecision() {
    struct Opts {
      Path src, tgt, gold;
      int k = 10;
      int at = 1;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(
        &app_, "eval-p@k", "Precision@k of CSLS retrieval against a gold lexicon",
        [o]() {
          const EmbeddingSpace src = LoadVec(o->src);
          const EmbeddingSpace tgt = LoadVec(o->tgt);
          std::size_t skipped = 0;
          align::GoldTranslations gold;
          for (const auto &[i, j] :
               align::ResolvePairs(src, tgt, LoadPairs(o->gold), &skipped)) {
            gold[i].insert(j);
          }
          const auto ranked = align::CslsRetrieve(src, tgt, o->k, o->at);
          Json summary;
          summary["at"] = o->at;
          summary["precision"] = Num(align::PrecisionAtK(ranked, gold, o->at));
          summary["gold_sources"] = gold.size();
          summary["skipped"] = skipped;
          return summary;
        });
    sub->add_option("--src", o->src, "Mapped source embeddings (.vec)")
        ->required();
    sub->add_option("--tgt", o->tgt, "Target embeddings (.vec)")->required();
    sub->add_option("--gold", o->gold, "Gold pairs (src<TAB>tgt)")->required();
    sub->add_option("--k", o->k, "CSLS neighborhood size (CSLS default 10)")
        ->capture_default_str();
    sub->add_option("--at", o->at, "Precision cutoff")->capture_default_str();
  }

  void AddCka() {
    struct Opts {
      Path x, y;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub =
        Sub(&app_, "cka", "Linear CKA between two representation matrices",
            [o]() {
              Json summary;
              summary["cka"] =
                  Num(similarity::LinearCka(LoadRows(o->x), LoadRows(o->y)));
              return summary;
            });
    sub->add_option("--x", o->x, "Rows of X (.vec or .pvec)")->required();
    sub->add_option("--y", o->y, "Rows of Y (.vec or .pvec)")->required();
  }

  struct LossOpts {
    std::string kind;
    Path batch, mlp;
    double temperature = losses::kDefaultTemperature;
  };

  static void AddLossOptions(CLI::App *sub, LossOpts *o) {
    sub->add_option("--kind", o->kind, "l2, weak or strong")
        ->required()
        ->check(CLI::IsMember({"l2", "weak", "strong"}));
    sub->add_option("--batch", o->batch,
                    "PVEC with entries S, T and optional S_full, S_full_pre")
        ->required();
    sub->add_option("--mlp", o->mlp,
                    "PVEC extractor (W1, b1, W2, b2); plain cosine if absent");
    sub->add_option("--temperature", o->temperature,
                    "Softmax temperature; 0.1 is the contrastive alignment "
                    "setting")
        ->capture_default_str();
  }

  void AddLoss() {
    struct Opts : LossOpts {
      Path theta, pretrained;
      double lambda = losses::kDefaultLambda;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(&app_, "loss", "Evaluate an alignment loss", [o]() {
      const auto batch = losses::LossBatch::FromParams(LoadPvec(o->batch));
      std::optional<losses::MlpExtractor> mlp;
      if (!o->mlp.empty()) mlp = losses::MlpExtractor::FromParams(LoadPvec(o->mlp));
      const losses::LossKind kind = losses::ParseLossKind(o->kind);
      Json summary;
      summary["kind"] = losses::LossKindName(kind);
      if (!o->theta.empty() || !o->pretrained.empty()) {
        if (kind != losses::LossKind::kL2 || o->theta.empty() ||
            o->pretrained.empty()) {
          throw ValidationError(
              "--theta and --pretrained go together and only with --kind l2");
        }
        summary["loss"] = Num(losses::L2WithParamRegularizer(
            batch, LoadPvec(o->theta), LoadPvec(o->pretrained), o->lambda));
      } else {
        summary["loss"] =
            Num(losses::Loss(kind, batch, mlp ? &*mlp : nullptr, o->temperature));
      }
      if (batch.source_full && batch.source_full_pretrained) {
        summary["reg_hidden"] = Num(losses::RegHidden(batch));
      }
      return summary;
    });
    AddLossOptions(sub, o.get());
    sub->add_option("--theta", o->theta, "Fine-tuned parameters (PVEC)");
    sub->add_option("--pretrained", o->pretrained,
                    "Pretrained parameters (PVEC)");
    sub->add_option("--lambda", o->lambda,
                    "Parameter regularizer weight; 1 as in the L2 alignment "
                    "objective")
        ->capture_default_str();
  }

  void AddGradCheck() {
    struct Opts : LossOpts {
      double step = 1e-4;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(
        &app_, "grad-check",
        "Compare analytic loss gradients with central differences", [o]() {
          const auto batch = losses::LossBatch::FromParams(LoadPvec(o->batch));
          std::optional<losses::MlpExtractor> mlp;
          if (!o->mlp.empty()) {
            mlp = losses::MlpExtractor::FromParams(LoadPvec(o->mlp));
          }
          const auto kind = losses::ParseLossKind(o->kind);
          const auto report = losses::CheckGradient(
              kind, batch, mlp ? &*mlp : nullptr, o->temperature, o->step);
          Json summary;
          summary["kind"] = losses::LossKindName(kind);
          summary["source"] = Num(report.source);
          summary["target"] = Num(report.target);
          summary["mlp"] = Num(report.mlp);
          summary["max"] = Num(report.Max());
          return summary;
        });
    AddLossOptions(sub, o.get());
    sub->add_option("--step", o->step, "Finite-difference step")
        ->capture_default_str();
  }

  void AddSymmetrize() {
    struct Opts {
      Path forward, backward, out;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(
        &app_, "symmetrize", "grow-diag-final-and symmetrization", [o]() {
          auto files = UnifyLengths({LoadPharaoh(o->forward),
                                     LoadPharaoh(o->backward)});
          std::vector<LinkSet> merged;
          std::size_t links = 0;
          for (std::size_t k = 0; k < files[0].size(); ++k) {
            merged.push_back(
                projection::SymmetrizeGdfa(files[0][k], files[1][k]));
            links += merged.back().size();
          }
          Save(o->out,
               [&](std::ostream &out) { io::WritePharaoh(out, merged); });
          Json summary;
          summary["sentences"] = merged.size();
          summary["links"] = links;
          return summary;
        });
    sub->add_option("--forward", o->forward, "Source-to-target (Pharaoh)")
        ->required();
    sub->add_option("--backward", o->backward,
                    "Target-to-source, in source-target order (Pharaoh)")
        ->required();
    sub->add_option("--out", o->out, "Symmetrized alignment (Pharaoh)")
        ->required();
  }

  void AddProject() {
    CLI::App *group =
        Group("project", "Project annotations along word alignments");
    struct Opts {
      Path src, align, tgt, out;
      double max_ratio = projection::kDefaultSpanRatio;
    };
    auto add_common = [](CLI::App *sub, Opts *o, const char *src_help,
                         const char *out_help) {
      sub->add_option("--src", o->src, src_help)->required();
      sub->add_option("--align", o->align, "Source-target alignment (Pharaoh)")
          ->required();
      sub->add_option("--tgt", o->tgt, "Target sentences, one per line")
          ->required();
      sub->add_option("--out", o->out, out_help)->required();
    };

    auto t = std::make_shared<Opts>();
    CLI::App *tokens = Sub(group, "tokens", "Project UPOS tags token by token",
                           [t]() {
      const auto src = LoadConllu(t->src);
      const auto links = LoadPharaoh(t->align);
      const auto tgt = LoadTokenized(t->tgt);
      CheckSameCount(src.size(), links.size(), "source vs alignment");
      CheckSameCount(src.size(), tgt.size(), "source vs target");
      std::vector<AnnotatedSentence> out;
      std::size_t labeled = 0;
      std::size_t total = 0;
      for (std::size_t k = 0; k < src.size(); ++k) {
        if (!src[k].pos) throw ValidationError("source sentence has no UPOS");
        const int m = static_cast<int>(tgt[k].size());
        const auto projected = projection::ProjectTokens(
            *src[k].pos, Widen(links[k], src[k].size(), m), m);
        AnnotatedSentence s;
        s.tokens = tgt[k];
        s.bio.emplace();
        for (const auto &label : projected) {
          s.bio->push_back(label.value_or("_"));
          labeled += label.has_value();
        }
        total += m;
        out.push_back(std::move(s));
      }
      Save(t->out, [&](std::ostream &os) { io::WriteBio(os, out); });
      Json summary;
      summary["sentences"] = out.size();
      summary["tokens"] = total;
      summary["labeled"] = labeled;
      return summary;
    });
    add_common(tokens, t.get(), "Annotated source (CoNLL-U)",
               "token<TAB>tag, '_' where nothing projects");

    auto s = std::make_shared<Opts>();
    CLI::App *spans = Sub(group, "spans", "Project BIO entity spans", [s]() {
      const auto src = LoadBio(s->src);
      const auto links = LoadPharaoh(s->align);
      const auto tgt = LoadTokenized(s->tgt);
      CheckSameCount(src.size(), links.size(), "source vs alignment");
      CheckSameCount(src.size(), tgt.size(), "source vs target");
      std::vector<AnnotatedSentence> out;
      std::size_t spans_in = 0;
      std::size_t spans_out = 0;
      for (std::size_t k = 0; k < src.size(); ++k) {
        const auto source_spans = SpansOf(*src[k].bio);
        const int m = static_cast<int>(tgt[k].size());
        const auto projected = projection::ProjectSpans(
            source_spans, Widen(links[k], src[k].size(), m), m, s->max_ratio);
        spans_in += source_spans.size();
        spans_out += projected.size();
        AnnotatedSentence sentence;
        sentence.tokens = tgt[k];
        sentence.bio = projection::BioFromSpans(projected, m);
        out.push_back(std::move(sentence));
      }
      Save(s->out, [&](std::ostream &os) { io::WriteBio(os, out); });
      Json summary;
      summary["sentences"] = out.size();
      summary["spans_in"] = spans_in;
      summary["spans_out"] = spans_out;
      return summary;
    });
    add_common(spans, s.get(), "Source token<TAB>BIO file",
               "Target token<TAB>BIO file");
    spans
        ->add_option("--max-ratio", s->max_ratio,
                     "Drop projections longer than this many times the "
                     "source span; 5 is the published span filter")
        ->capture_default_str();

    auto d = std::make_shared<Opts>();
    CLI::App *deps = Sub(group, "deps", "Project dependency trees", [d]() {
      const auto src = LoadConllu(d->src);
      const auto links = LoadPharaoh(d->align);
      const auto tgt = LoadTokenized(d->tgt);
      CheckSameCount(src.size(), links.size(), "source vs alignment");
      CheckSameCount(src.size(), tgt.size(), "source vs target");
      std::ostringstream buf;
      std::size_t annotated = 0;
      std::size_t total = 0;
      for (std::size_t k = 0; k < src.size(); ++k) {
        if (!src[k].heads || !src[k].deprels) {
          throw ValidationError("source sentence has no HEAD/DEPREL");
        }
        const int m = static_cast<int>(tgt[k].size());
        const auto projected = projection::ProjectDependencies(
            *src[k].heads, *src[k].deprels,
            Widen(links[k], src[k].size(), m), m);
        AnnotatedSentence sentence;
        sentence.tokens = tgt[k];
        io::WriteConlluPartial(buf, sentence, projected.heads,
                               projected.deprels);
        for (const auto &h : projected.heads) annotated += h.has_value();
        total += m;
      }
      io::WriteFile(d->out, buf.str());
      Json summary;
      summary["sentences"] = src.size();
      summary["tokens"] = total;
      summary["annotated"] = annotated;
      return summary;
    });
    add_common(deps, d.get(), "Parsed source (CoNLL-U)",
               "Target CoNLL-U with '_' for unannotated tokens");
  }

  void AddRepairBio() {
    struct Opts {
      Path in, out;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub =
        Sub(&app_, "repair-bio", "Rewrite invalid BIO sequences", [o]() {
          auto sentences = LoadBio(o->in);
          std::size_t changed = 0;
          for (auto &s : sentences) {
            auto repaired = projection::RepairBio(*s.bio);
            for (std::size_t i = 0; i < repaired.size(); ++i) {
              changed += repaired[i] != (*s.bio)[i];
            }
            s.bio = std::move(repaired);
          }
          Save(o->out, [&](std::ostream &os) { io::WriteBio(os, sentences); });
          Json summary;
          summary["sentences"] = sentences.size();
          summary["changed_tags"] = changed;
          return summary;
        });
    sub->add_option("--in", o->in, "token<TAB>label file")->required();
    sub->add_option("--out", o->out, "Repaired token<TAB>label file")
        ->required();
  }

  void AddEvalAlign() {
    struct Opts {
      Path pred, sure, possible;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(
        &app_, "eval-align", "AER, precision, recall and F1 of an alignment",
        [o]() {
          std::vector<std::vector<LinkSet>> files{LoadPharaoh(o->pred),
                                                  LoadPharaoh(o->sure)};
          if (!o->possible.empty()) files.push_back(LoadPharaoh(o->possible));
          files = UnifyLengths(std::move(files));
          projection::AlignmentCounts counts;
          for (std::size_t k = 0; k < files[0].size(); ++k) {
            LinkSet possible = files.size() == 3 ? files[2][k] : files[1][k];
            for (const Link &l : files[1][k].links()) possible.Add(l);
            projection::GoldAlignment gold{files[1][k], possible};
            counts += projection::CountAlignment(files[0][k], gold);
          }
          const auto scores = projection::ScoreAlignment(counts);
          Json summary;
          summary["aer"] = Num(scores.aer);
          summary["precision"] = Num(scores.precision);
          summary["recall"] = Num(scores.recall);
          summary["f1"] = Num(scores.f1);
          summary["sentences"] = files[0].size();
          return summary;
        });
    sub->add_option("--pred", o->pred, "Predicted alignment (Pharaoh)")
        ->required();
    sub->add_option("--sure", o->sure, "Sure gold links (Pharaoh)")
        ->required();
    sub->add_option("--possible", o->possible,
                    "Possible gold links (Pharaoh); sure links are added");
  }

  void AddCodeSwitch() {
    struct Opts {
      Path in, dict, out;
      synthesis::CodeSwitchOptions options;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(
        &app_, "codeswitch", "Replace dictionary words by translations", [o]() {
          const auto corpus = LoadTokenized(o->in);
          const auto dict = Load(o->dict, [](std::istream &in) {
            return io::ReadDictionary(in);
          });
          Rng rng(o->seed);
          const auto result = synthesis::CodeSwitch(corpus, dict, rng, o->options);
          Save(o->out, [&](std::ostream &os) {
            io::WriteTokenized(os, result.sentences);
          });
          Json summary;
          summary["dictionary_tokens"] = result.dictionary_tokens;
          summary["replaced"] = result.replaced;
          summary["suppressed"] = result.suppressed;
          summary["cap_limit"] = result.cap_limit;
          return summary;
        });
    sub->add_option("--in", o->in, "Sentences, one per line")->required();
    sub->add_option("--dict", o->dict, "source<TAB>target[<TAB>weight]")
        ->required();
    sub->add_option("--out", o->out, "Code-switched sentences")->required();
    sub->add_option("--p", o->options.p_replace,
                    "Replacement probability; 0.3 is the published "
                    "code-switching rate")
        ->capture_default_str();
    sub->add_option("--cap", o->options.cap,
                    "Max fraction of tokens replaced; 0.15 is the published "
                    "batch cap")
        ->capture_default_str();
    sub->add_option("--seed", o->seed, "Random seed")->capture_default_str();
  }

  void AddMask() {
    struct Opts {
      Path in, counts, vocab, out;
      double rate = 0.15;
      std::string scheme = "uniform";
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(&app_, "mask", "MLM mask plan", [o]() {
      const auto corpus = LoadTokenized(o->in);
      const auto scheme = synthesis::ParseMaskScheme(o->scheme);
      synthesis::TokenCounts counts;
      std::vector<std::string> vocabulary;
      std::set<std::string> seen;
      auto add_word = [&](const std::string &w) {
        if (seen.insert(w).second) vocabulary.push_back(w);
      };
      if (!o->counts.empty()) {
        for (auto &[token, count] : Load(o->counts, [](std::istream &in) {
               return io::ReadCounts(in);
             })) {
          add_word(token);
          counts[token] = count;
        }
      }
      if (!o->vocab.empty()) {
        vocabulary.clear();
        seen.clear();
        for (const auto &line : LoadTokenized(o->vocab)) {
          for (const auto &w : line) add_word(w);
        }
      } else if (vocabulary.empty()) {
        for (const auto &line : corpus) {
          for (const auto &w : line) add_word(w);
        }
      }
      if (scheme == synthesis::MaskScheme::kRareFavoring && counts.empty()) {
        throw ValidationError("--scheme rare needs --counts");
      }
      Rng rng(o->seed);
      std::map<std::string, long> tally;
      std::ostringstream buf;
      std::size_t selected = 0;
      for (const auto &tokens : corpus) {
        const auto plan = synthesis::MlmMask(
            tokens, counts.empty() ? nullptr : &counts, vocabulary, rng,
            o->rate, scheme);
        synthesis::WriteMaskPlan(buf, plan, vocabulary);
        buf << '\n';
        selected += plan.selected.size();
        for (std::size_t i : plan.selected) {
          ++tally[synthesis::MaskActionName(plan.actions[i])];
        }
      }
      io::WriteFile(o->out, buf.str());
      Json summary;
      summary["sentences"] = corpus.size();
      summary["selected"] = selected;
      for (const char *name : {"mask", "original", "random"}) {
        summary[name] = tally[name];
      }
      return summary;
    });
    sub->add_option("--in", o->in, "Sentences, one per line")->required();
    sub->add_option("--out", o->out,
                    "index<TAB>action<TAB>replacement rows, blank line "
                    "between sentences")
        ->required();
    sub->add_option("--rate", o->rate,
                    "Fraction of tokens selected; 0.15 is the standard MLM "
                    "rate")
        ->capture_default_str();
    sub->add_option("--scheme", o->scheme,
                    "uniform, or rare (probability ~ count^-0.5)")
        ->capture_default_str();
    sub->add_option("--counts", o->counts, "token<TAB>count frequency table");
    sub->add_option("--vocab", o->vocab,
                    "Replacement vocabulary (default: --counts tokens, else "
                    "corpus tokens)");
    sub->add_option("--seed", o->seed, "Random seed")->capture_default_str();
  }

  void AddCombine() {
    struct Opts {
      Path gold, silver, out;
      std::string kind = "projected";
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(
        &app_, "combine", "Concatenate gold and silver treebanks", [o]() {
          const auto tagged = synthesis::CombineGoldSilver(
              LoadConllu(o->gold), LoadConllu(o->silver),
              synthesis::ParseSilverKind(o->kind));
          std::vector<AnnotatedSentence> out;
          std::map<std::string, long> tally;
          for (const auto &t : tagged) {
            AnnotatedSentence s = t.sentence;
            const std::string name = synthesis::ProvenanceName(t.provenance);
            s.conllu.comments.insert(s.conllu.comments.begin(),
                                     "# provenance = " + name);
            ++tally[name];
            out.push_back(std::move(s));
          }
          Save(o->out, [&](std::ostream &os) { io::WriteConllu(os, out); });
          Json summary;
          summary["gold"] = tally["gold"];
          summary["silver"] = static_cast<long>(out.size()) - tally["gold"];
          summary["silver_kind"] = synthesis::ProvenanceName(
              synthesis::ParseSilverKind(o->kind));
          return summary;
        });
    sub->add_option("--gold", o->gold, "Gold treebank (CoNLL-U)")->required();
    sub->add_option("--silver", o->silver, "Silver treebank (CoNLL-U)")
        ->required();
    sub->add_option("--kind", o->kind, "projected or selftrained")
        ->capture_default_str();
    sub->add_option("--out", o->out, "Combined CoNLL-U")->required();
  }

  void AddInterp() {
    CLI::App *group = Group("interp", "Checkpoint parameter interpolation");
    struct Opts {
      Path a, b, bi, src, tgt, out, out_dir, manifest, results;
      double alpha = 0, alpha1 = 0, alpha2 = 0;
      std::vector<double> grid;
      bool extras = false;
      interp::IncludeList include;
    };
    auto add_include = [](CLI::App *sub, Opts *o) {
      sub->add_option("--include", o->include,
                      "Only interpolate parameters with these name prefixes");
    };

    auto p1 = std::make_shared<Opts>();
    CLI::App *one = Sub(group, "1d", "(1 - alpha) a + alpha b", [p1]() {
      const auto result = interp::Interp1d(LoadPvec(p1->a), LoadPvec(p1->b),
                                           p1->alpha, p1->include);
      SavePvec(p1->out, result);
      Json summary;
      summary["alpha"] = Num(p1->alpha);
      summary["parameters"] = result.TotalElements();
      return summary;
    });
    one->add_option("--a", p1->a, "Checkpoint at alpha 0 (PVEC)")->required();
    one->add_option("--b", p1->b, "Checkpoint at alpha 1 (PVEC)")->required();
    one->add_option("--alpha", p1->alpha, "Interpolation coefficient")
        ->required();
    one->add_option("--out", p1->out, "Output checkpoint (PVEC)")->required();
    add_include(one, p1.get());

    auto p2 = std::make_shared<Opts>();
    CLI::App *two = Sub(
        group, "2d", "bi + alpha1 (src - bi) + alpha2 (tgt - bi)", [p2]() {
          const auto result = interp::Interp2d(
              LoadPvec(p2->bi), LoadPvec(p2->src), LoadPvec(p2->tgt),
              p2->alpha1, p2->alpha2, p2->include);
          SavePvec(p2->out, result);
          Json summary;
          summary["alpha1"] = Num(p2->alpha1);
          summary["alpha2"] = Num(p2->alpha2);
          summary["parameters"] = result.TotalElements();
          return summary;
        });
    two->add_option("--bi", p2->bi, "Base checkpoint (PVEC)")->required();
    two->add_option("--src", p2->src, "Source-language checkpoint")->required();
    two->add_option("--tgt", p2->tgt, "Target-language checkpoint")->required();
    two->add_option("--alpha1", p2->alpha1)->required();
    two->add_option("--alpha2", p2->alpha2)->required();
    two->add_option("--out", p2->out, "Output checkpoint (PVEC)")->required();
    add_include(two, p2.get());

    auto sw = std::make_shared<Opts>();
    CLI::App *sweep = Sub(
        group, "sweep", "Write checkpoints for a whole grid plus manifest.tsv",
        [sw]() {
          const interp::InterpGrid grid =
              sw->grid.empty() ? interp::InterpGrid::Default(sw->extras)
                               : interp::InterpGrid(sw->grid);
          std::filesystem::create_directories(sw->out_dir);
          std::vector<interp::ManifestRow> rows;
          const bool one_d = !sw->a.empty() || !sw->b.empty();
          const bool two_d =
              !sw->bi.empty() || !sw->src.empty() || !sw->tgt.empty();
          if (one_d == two_d) {
            throw ValidationError("give either --a/--b or --bi/--src/--tgt");
          }
          if (one_d) {
            rows = interp::Sweep1d(LoadPvec(sw->a), LoadPvec(sw->b), grid,
                                   sw->out_dir, sw->include);
          } else {
            rows = interp::Sweep2d(LoadPvec(sw->bi), LoadPvec(sw->src),
                                   LoadPvec(sw->tgt), grid, grid, sw->out_dir,
                                   sw->include);
          }
          Json summary;
          summary["checkpoints"] = rows.size();
          summary["grid_points"] = grid.size();
          return summary;
        });
    sweep->add_option("--a", sw->a, "1D: checkpoint at alpha 0");
    sweep->add_option("--b", sw->b, "1D: checkpoint at alpha 1");
    sweep->add_option("--bi", sw->bi, "2D: base checkpoint");
    sweep->add_option("--src", sw->src, "2D: source-language checkpoint");
    sweep->add_option("--tgt", sw->tgt, "2D: target-language checkpoint");
    sweep->add_option("--out-dir", sw->out_dir, "Output directory")
        ->required();
    sweep->add_option("--grid", sw->grid,
                      "Alpha values (default -0.5, -0.4, ..., 1.5)");
    sweep->add_flag("--extras", sw->extras,
                    "Add the 12 extra points near 0 and 1 to the default "
                    "grid");
    add_include(sweep, sw.get());

    auto mr = std::make_shared<Opts>();
    CLI::App *merge = Sub(
        group, "merge-results", "Join evaluation scores with grid coordinates",
        [mr]() {
          const auto manifest = Load(mr->manifest, [](std::istream &in) {
            return interp::ReadManifest(in);
          });
          const auto results = Load(mr->results, [](std::istream &in) {
            return interp::ReadResults(in);
          });
          Save(mr->out, [&](std::ostream &os) {
            interp::MergeResults(os, manifest, results);
          });
          Json summary;
          summary["rows"] = results.size();
          return summary;
        });
    merge->add_option("--manifest", mr->manifest, "manifest.tsv from sweep")
        ->required();
    merge->add_option("--results", mr->results, "file<TAB>score[<TAB>seed]")
        ->required();
    merge->add_option("--out", mr->out, "CSV output")->required();
  }

  void AddDeltaStats() {
    struct Opts {
      Path bi, src, tgt;
      interp::IncludeList include;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(
        &app_, "delta-stats", "Norms and angle of the two interpolation directions",
        [o]() {
          const auto stats = interp::ComputeDeltaStats(
              LoadPvec(o->bi), LoadPvec(o->src), LoadPvec(o->tgt), o->include);
          Json summary;
          summary["norm_src"] = Num(stats.norm_src);
          summary["norm_tgt"] = Num(stats.norm_tgt);
          summary["norm_ratio"] = Num(stats.norm_ratio);
          summary["angle_degrees"] = Num(stats.angle_degrees);
          return summary;
        });
    sub->add_option("--bi", o->bi, "Base checkpoint (PVEC)")->required();
    sub->add_option("--src", o->src, "Source-language checkpoint")->required();
    sub->add_option("--tgt", o->tgt, "Target-language checkpoint")->required();
    sub->add_option("--include", o->include, "Parameter name prefixes");
  }

  void AddOverlap() {
    struct Opts {
      Path train, test;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub =
        Sub(&app_, "overlap", "Subword type and token overlap", [o]() {
          std::unordered_set<std::string> vocab;
          for (const auto &line : LoadTokenized(o->train)) {
            vocab.insert(line.begin(), line.end());
          }
          std::vector<std::string> test;
          for (const auto &line : LoadTokenized(o->test)) {
            test.insert(test.end(), line.begin(), line.end());
          }
          const auto report = stats::Overlap(vocab, test);
          Json summary;
          summary["p_type"] = Num(report.p_type);
          summary["p_token"] = Num(report.p_token);
          return summary;
        });
    sub->add_option("--train-vocab", o->train,
                    "Whitespace-tokenized training subwords")
        ->required();
    sub->add_option("--test", o->test, "Whitespace-tokenized test subwords")
        ->required();
  }

  void AddPearson() {
    struct Opts {
      Path x, y;
    };
    auto o = std::make_shared<Opts>();
    CLI::App *sub = Sub(
        &app_, "pearson", "Pearson correlation with a two-sided t-test", [o]() {
          const auto result =
              stats::Pearson(LoadNumbers(o->x), LoadNumbers(o->y));
          Json summary;
          summary["r"] = Num(result.r);
          summary["p_value"] = Num(result.p_value);
          return summary;
        });
    sub->add_option("--x", o->x, "Whitespace-separated numbers")->required();
    sub->add_option("--y", o->y, "Whitespace-separated numbers")->required();
  }

  CLI::App app_;
  std::vector<Command> commands_;
};

}  // namespace

double Round10(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return std::strtod(buf, nullptr);
}

int Dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err) {
  Cli cli;
  return cli.Run(args, out, err);
}

}  // namespace xlrep::cli
