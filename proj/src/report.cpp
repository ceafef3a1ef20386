#include "mvrobust/report.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace mvrobust {

using nlohmann::json;

json model_to_json(const Model& m) {
  json rels = json::array();
  for (const auto& r : m.schema().relations) {
    json jr;
    jr["name"] = r.name;
    jr["attributes"] = r.attributes;
    jr["readonly"] = r.attr_names(r.read_only);
    jr["workload_readonly"] = r.workload_read_only;
    rels.push_back(jr);
  }
  json tmpls = json::array();
  for (const auto& t : m.templates()) {
    json jt;
    jt["name"] = t.name;
    json ops = json::array();
    for (const auto& op : t.operations) {
      const Relation& rel = m.schema().relations[op.relation];
      json jo;
      jo["kind"] = to_string(op.kind);
      jo["var"] = t.variables[op.variable].name;
      jo["relation"] = rel.name;
      jo["reads"] = rel.attr_names(op.read_set);
      jo["writes"] = rel.attr_names(op.write_set);
      ops.push_back(jo);
    }
    jt["operations"] = ops;
    tmpls.push_back(jt);
  }
  return json{{"relations", rels}, {"templates", tmpls}};
}

Model model_from_json(const json& j) {
  Schema schema;
  for (const auto& jr : j.at("relations")) {
    Relation r;
    r.name = jr.at("name").get<std::string>();
    r.attributes = jr.at("attributes").get<std::vector<std::string>>();
    for (const auto& a : jr.at("readonly")) {
      int idx = r.attr_index(a.get<std::string>());
      if (idx < 0)
        throw ModelError("AttributeNotInRelation",
                         "readonly attribute not declared: " +
                             a.get<std::string>());
      r.read_only |= AttrSet(1) << idx;
    }
    r.workload_read_only = jr.value("workload_readonly", false);
    schema.relations.push_back(std::move(r));
  }
  std::vector<Template> templates;
  for (const auto& jt : j.at("templates")) {
    Template t;
    t.name = jt.at("name").get<std::string>();
    for (const auto& jo : jt.at("operations")) {
      std::string kind = jo.at("kind").get<std::string>();
      TemplateOperation op;
      if (kind == "R")
        op.kind = OpKind::Read;
      else if (kind == "W")
        op.kind = OpKind::Write;
      else if (kind == "U")
        op.kind = OpKind::Update;
      else
        throw ModelError("InvalidOperation", "unknown operation kind " + kind);
      std::string rel_name = jo.at("relation").get<std::string>();
      op.relation = schema.relation_index(rel_name);
      if (op.relation < 0)
        throw ModelError("UnknownRelation", "unknown relation " + rel_name);
      const Relation& rel = schema.relations[op.relation];
      std::string var = jo.at("var").get<std::string>();
      int v = t.variable_index(var);
      if (v < 0) {
        v = static_cast<int>(t.variables.size());
        t.variables.push_back({var, op.relation});
      }
      op.variable = v;
      auto parse_set = [&](const json& arr) {
        AttrSet s = 0;
        for (const auto& a : arr) {
          int idx = rel.attr_index(a.get<std::string>());
          if (idx < 0)
            throw ModelError("AttributeNotInRelation",
                             "attribute " + a.get<std::string>() +
                                 " not in relation " + rel.name);
          s |= AttrSet(1) << idx;
        }
        return s;
      };
      op.read_set = parse_set(jo.at("reads"));
      op.write_set = parse_set(jo.at("writes"));
      t.operations.push_back(op);
    }
    templates.push_back(std::move(t));
  }
  return Model::validate(std::move(schema), std::move(templates));
}

json allocation_to_json(const Model& m, const Allocation& a) {
  json out;
  for (int t = 0; t < static_cast<int>(m.templates().size()); ++t)
    out[m.templates()[t].name] = to_string(a[t]);
  return out;
}

Allocation allocation_from_json(const Model& m, const json& j) {
  auto alloc = Allocation::uniform(m, IsolationLevel::SSI);
  for (auto it = j.begin(); it != j.end(); ++it) {
    int t = m.template_index(it.key());
    if (t < 0)
      throw ModelError("UnknownTemplate",
                       "unknown template in allocation: " + it.key());
    auto level = parse_isolation_level(it.value().get<std::string>());
    if (!level)
      throw ModelError("InvalidLevel",
                       "unknown isolation level: " +
                           it.value().get<std::string>());
    alloc.set(t, *level);
  }
  return alloc;
}

json sequence_to_json(const Model& m, const Sequence& seq) {
  json out = json::array();
  for (const auto& q : seq.quads)
    out.push_back(json{{"from", m.templates()[q.from_template].name},
                       {"out_op", q.out_op + 1},
                       {"in_op", q.in_op + 1},
                       {"to", m.templates()[q.to_template].name}});
  return out;
}

Sequence sequence_from_json(const Model& m, const json& j) {
  Sequence seq;
  for (const auto& jq : j) {
    Quadruple q;
    q.from_template = m.template_index(jq.at("from").get<std::string>());
    q.to_template = m.template_index(jq.at("to").get<std::string>());
    if (q.from_template < 0 || q.to_template < 0)
      throw ModelError("UnknownTemplate", "unknown template in quadruple");
    q.out_op = jq.at("out_op").get<int>() - 1;
    q.in_op = jq.at("in_op").get<int>() - 1;
    seq.quads.push_back(q);
  }
  if (!sequence_well_formed(m, seq))
    throw ModelError("InvalidSequence",
                     "quadruple sequence is not well formed");
  return seq;
}

json witness_to_json(const Model& m, const Witness& w) {
  json out;
  out["schema_version"] = kReportSchemaVersion;
  out["model"] = model_to_json(m);
  out["tau1"] = m.templates()[w.params.tau1].name;
  out["o1"] = w.params.o1 + 1;
  out["p1"] = w.params.p1 + 1;
  out["h"] = w.params.h;
  out["o1_p1_connected"] = w.o1_p1_connected;
  out["quadruples"] = sequence_to_json(m, w.sequence);
  out["endpoints"] = json{{"tau2", m.templates()[w.endpoints.tau2].name},
                          {"o2", w.endpoints.o2 + 1},
                          {"p2", w.endpoints.p2 + 1},
                          {"c_o2", to_string(w.endpoints.c_o2)},
                          {"taun", m.templates()[w.endpoints.taun].name},
                          {"on", w.endpoints.on + 1},
                          {"pn", w.endpoints.pn + 1},
                          {"c_pn", to_string(w.endpoints.c_pn)}};
  json labels = json::array();
  for (int occ = 1; occ <= w.sequence.length(); ++occ) {
    const Template& t = m.templates()[w.sequence.occurrence_template(occ)];
    json vars;
    for (int v = 0; v < static_cast<int>(t.variables.size()); ++v)
      vars[t.variables[v].name] = to_string(w.occurrence_labels[occ - 1][v]);
    labels.push_back(json{{"occurrence", occ},
                          {"template", t.name},
                          {"variables", vars}});
  }
  out["labels"] = labels;
  return out;
}

LoadedWitness witness_from_json(const json& j) {
  LoadedWitness out;
  out.model = model_from_json(j.at("model"));
  const Model& m = out.model;
  Witness& w = out.witness;
  w.params.tau1 = m.template_index(j.at("tau1").get<std::string>());
  if (w.params.tau1 < 0)
    throw ModelError("UnknownTemplate", "unknown tau1 in witness");
  w.params.o1 = j.at("o1").get<int>() - 1;
  w.params.p1 = j.at("p1").get<int>() - 1;
  w.params.h = j.at("h").get<int>();
  w.o1_p1_connected = j.at("o1_p1_connected").get<bool>();
  w.sequence = sequence_from_json(m, j.at("quadruples"));
  const json& ep = j.at("endpoints");
  w.endpoints.tau2 = m.template_index(ep.at("tau2").get<std::string>());
  w.endpoints.o2 = ep.at("o2").get<int>() - 1;
  w.endpoints.p2 = ep.at("p2").get<int>() - 1;
  w.endpoints.c_o2 = *parse_label(ep.at("c_o2").get<std::string>());
  w.endpoints.taun = m.template_index(ep.at("taun").get<std::string>());
  w.endpoints.on = ep.at("on").get<int>() - 1;
  w.endpoints.pn = ep.at("pn").get<int>() - 1;
  w.endpoints.c_pn = *parse_label(ep.at("c_pn").get<std::string>());
  for (const auto& jl : j.at("labels")) {
    int occ = jl.at("occurrence").get<int>();
    const Template& t = m.templates()[w.sequence.occurrence_template(occ)];
    std::vector<Label> labels(t.variables.size(), Label::N);
    const json& vars = jl.at("variables");
    for (int v = 0; v < static_cast<int>(t.variables.size()); ++v)
      labels[v] =
          *parse_label(vars.at(t.variables[v].name).get<std::string>());
    w.occurrence_labels.push_back(std::move(labels));
  }
  return out;
}

json schedule_to_json(const Model& m, const MVSchedule& s) {
  json ops = json::array();
  for (const auto& op : s.ops) {
    json jo;
    jo["txn"] = op.txn;
    if (op.kind == SchedKind::Commit) {
      jo["kind"] = "C";
    } else {
      jo["kind"] = op.kind == SchedKind::Read    ? "R"
                   : op.kind == SchedKind::Write ? "W"
                                                 : "U";
      const Relation& rel = m.schema().relations[op.relation];
      jo["relation"] = rel.name;
      jo["tuple"] = op.tuple;
      jo["reads"] = rel.attr_names(op.read_set);
      jo["writes"] = rel.attr_names(op.write_set);
    }
    ops.push_back(jo);
  }
  json versions = json::array();
  for (const auto& tv : s.version_order)
    versions.push_back(json{{"relation", m.schema().relations[tv.relation].name},
                            {"tuple", tv.tuple},
                            {"writes", tv.writes}});
  json vf = json::array();
  for (int i = 0; i < static_cast<int>(s.ops.size()); ++i)
    if (s.version_fn[i] != -2)
      vf.push_back(json{{"op", i}, {"observes", s.version_fn[i]}});
  json txns = json::array();
  for (int t = 0; t < s.txn_count; ++t) {
    json jt{{"id", t}};
    if (t < static_cast<int>(s.txns.size()) &&
        s.txns[t].source_template >= 0) {
      const Template& tmpl = m.templates()[s.txns[t].source_template];
      jt["template"] = tmpl.name;
      jt["occurrence"] = s.txns[t].occurrence;
      json tuples;
      for (int v = 0; v < static_cast<int>(tmpl.variables.size()); ++v)
        tuples[tmpl.variables[v].name] = s.txns[t].tuple_of_var[v];
      jt["tuples"] = tuples;
    }
    txns.push_back(jt);
  }
  return json{{"transactions", txns},
              {"operations", ops},
              {"version_order", versions},
              {"version_function", vf}};
}

MVSchedule schedule_from_json(const Model& m, const json& j) {
  MVSchedule s;
  for (const auto& jo : j.at("operations")) {
    SchedOp op;
    op.txn = jo.at("txn").get<int>();
    std::string kind = jo.at("kind").get<std::string>();
    if (kind == "C") {
      op.kind = SchedKind::Commit;
    } else {
      op.kind = kind == "R" ? SchedKind::Read
                : kind == "W" ? SchedKind::Write
                              : SchedKind::Update;
      std::string rel_name = jo.at("relation").get<std::string>();
      op.relation = m.schema().relation_index(rel_name);
      if (op.relation < 0)
        throw ModelError("UnknownRelation",
                         "unknown relation in schedule: " + rel_name);
      const Relation& rel = m.schema().relations[op.relation];
      op.tuple = jo.at("tuple").get<int>();
      for (const auto& a : jo.at("reads"))
        op.read_set |= AttrSet(1) << rel.attr_index(a.get<std::string>());
      for (const auto& a : jo.at("writes"))
        op.write_set |= AttrSet(1) << rel.attr_index(a.get<std::string>());
    }
    s.txn_count = std::max(s.txn_count, op.txn + 1);
    s.ops.push_back(op);
  }
  for (const auto& tv : j.at("version_order")) {
    TupleVersions v;
    v.relation =
        m.schema().relation_index(tv.at("relation").get<std::string>());
    v.tuple = tv.at("tuple").get<int>();
    v.writes = tv.at("writes").get<std::vector<int>>();
    s.version_order.push_back(std::move(v));
  }
  s.version_fn.assign(s.ops.size(), -2);
  for (int i = 0; i < static_cast<int>(s.ops.size()); ++i)
    if (s.ops[i].kind != SchedKind::Commit && s.ops[i].is_read())
      s.version_fn[i] = -1;
  for (const auto& jv : j.at("version_function"))
    s.version_fn[jv.at("op").get<int>()] = jv.at("observes").get<int>();
  s.check_well_formed();
  return s;
}

json check_report(const Model& m, const Allocation& alloc,
                  const Verdict& verdict) {
  json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "check";
  out["allocation"] = allocation_to_json(m, alloc);
  out["robust"] = verdict.robust;
  if (!verdict.robust) {
    const Witness& w = *verdict.witness;
    out["witness"] = witness_to_json(m, w);
    MVSchedule s = build_split_schedule(m, w.sequence, alloc);
    out["schedule"] = schedule_to_json(m, s);
    OracleCheck check = verify_sequence(m, alloc, w.sequence);
    out["oracle_verified"] = check.ok();
  } else {
    out["oracle_verified"] = false;
  }
  return out;
}

json lowest_report(const Model& m, const Allocation& lowest) {
  json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "lowest";
  out["allocation"] = allocation_to_json(m, lowest);
  return out;
}

json promotions_report(const Model& m, const std::vector<ExploreRow>& rows) {
  auto groups = group_rows(rows);
  std::vector<std::string> group_of(rows.size());
  json jgroups = json::array();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::string id(1, static_cast<char>('A' + g));
    json labels = json::array();
    for (int row : groups[g]) {
      group_of[row] = id;
      labels.push_back(rows[row].label);
    }
    jgroups.push_back(
        json{{"id", id},
             {"allocation", allocation_to_json(m, rows[groups[g][0]].lowest)},
             {"choices", labels}});
  }
  json jrows = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json choice = json::array();
    for (const auto& p : rows[i].choice.promoted)
      choice.push_back(json{{"template", m.templates()[p.template_idx].name},
                            {"op", p.op + 1}});
    jrows.push_back(json{{"label", rows[i].label},
                         {"choice", choice},
                         {"allocation", allocation_to_json(m, rows[i].lowest)},
                         {"group", group_of[i]}});
  }
  json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "promotions";
  out["rows"] = jrows;
  out["groups"] = jgroups;
  return out;
}

json oracle_verify_report(const Model& m, const Allocation& alloc,
                          const Witness& w) {
  json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "oracle_verify";
  out["allocation"] = allocation_to_json(m, alloc);
  std::string why;
  bool conditions = sequence_admits_split_schedule(m, alloc, w.sequence, &why);
  out["conditions_hold"] = conditions;
  if (!conditions) out["conditions_violation"] = why;
  MVSchedule s = build_split_schedule(m, w.sequence, alloc);
  OracleCheck check = verify_sequence(m, alloc, w.sequence);
  out["allowed"] = check.allowed;
  out["conflict_serializable"] = check.serializable;
  out["valid"] = conditions && check.ok();
  out["schedule"] = schedule_to_json(m, s);
  return out;
}

json oracle_search_report(const Model& m, const Allocation& alloc, int bound,
                          const std::optional<SearchHit>& hit) {
  json out;
  out["schema_version"] = kReportSchemaVersion;
  out["command"] = "oracle_search";
  out["allocation"] = allocation_to_json(m, alloc);
  out["bound"] = bound;
  out["found"] = hit.has_value();
  if (hit) {
    out["quadruples"] = sequence_to_json(m, hit->sequence);
    out["schedule"] =
        schedule_to_json(m, build_split_schedule(m, hit->sequence, alloc));
  } else {
    out["note"] = "no counterexample within bound " + std::to_string(bound) +
                  "; robustness is not implied";
  }
  return out;
}

namespace {

std::string allocation_line(const json& alloc) {
  std::ostringstream out;
  bool first = true;
  for (auto it = alloc.begin(); it != alloc.end(); ++it) {
    if (!first) out << " ";
    out << it.key() << "=" << it.value().get<std::string>();
    first = false;
  }
  return out.str();
}

std::string quadruples_text(const json& quads) {
  std::ostringstream out;
  for (const auto& q : quads)
    out << "  (" << q.at("from").get<std::string>() << "[" << q.at("out_op")
        << "] -> " << q.at("to").get<std::string>() << "[" << q.at("in_op")
        << "])\n";
  return out.str();
}

}  // namespace

std::string render_text(const json& report, const Model& m) {
  (void)m;
  std::ostringstream out;
  std::string cmd = report.at("command").get<std::string>();
  if (cmd == "check") {
    out << "robust: " << (report.at("robust").get<bool>() ? "true" : "false")
        << "\n";
    if (!report.at("robust").get<bool>()) {
      out << "witness (h=" << report.at("witness").at("h") << ", "
          << report.at("witness").at("quadruples").size()
          << " quadruples):\n"
          << quadruples_text(report.at("witness").at("quadruples"));
      out << "oracle verified: "
          << (report.at("oracle_verified").get<bool>() ? "true" : "false")
          << "\n";
    }
  } else if (cmd == "lowest") {
    out << allocation_line(report.at("allocation")) << "\n";
  } else if (cmd == "promotions") {
    for (const auto& row : report.at("rows"))
      out << row.at("group").get<std::string>() << " | "
          << row.at("label").get<std::string>() << " | "
          << allocation_line(row.at("allocation")) << "\n";
    out << "groups:\n";
    for (const auto& g : report.at("groups"))
      out << "  (" << g.at("id").get<std::string>() << ") "
          << allocation_line(g.at("allocation")) << "  ["
          << g.at("choices").size() << " choices]\n";
  } else if (cmd == "oracle_verify") {
    out << "conditions hold: "
        << (report.at("conditions_hold").get<bool>() ? "true" : "false")
        << "\n"
        << "allowed under allocation: "
        << (report.at("allowed").get<bool>() ? "true" : "false") << "\n"
        << "conflict-serializable: "
        << (report.at("conflict_serializable").get<bool>() ? "true" : "false")
        << "\n"
        << "witness valid: "
        << (report.at("valid").get<bool>() ? "true" : "false") << "\n";
  } else if (cmd == "oracle_search") {
    if (report.at("found").get<bool>())
      out << "counterexample found:\n"
          << quadruples_text(report.at("quadruples"));
    else
      out << report.at("note").get<std::string>() << "\n";
  }
  return out.str();
}

}  // namespace mvrobust
