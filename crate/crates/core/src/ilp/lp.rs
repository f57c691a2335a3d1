//! CPLEX LP text and a JSON map from variable names back to the network.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use super::{IlpModel, Sense, Var};

const WIDTH: usize = 78;

fn push_terms(
    out: &mut String,
    head: &str,
    terms: impl Iterator<Item = (String, i64)>,
    tail: &str,
) {
    let mut line = format!(" {head}");
    let mut first = true;
    for (name, coef) in terms {
        let sign = match (first, coef < 0) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => "+ ",
            (false, true) => "- ",
        };
        let mag = coef.unsigned_abs();
        let token = if mag == 1 {
            format!("{sign}{name}")
        } else {
            format!("{sign}{mag} {name}")
        };
        if line.len() + 1 + token.len() > WIDTH {
            out.push_str(&line);
            out.push('\n');
            line = "   ".to_string();
        } else {
            line.push(' ');
        }
        line.push_str(&token);
        first = false;
    }
    if !tail.is_empty() {
        if line.len() + 1 + tail.len() > WIDTH {
            out.push_str(&line);
            out.push('\n');
            line = "   ".to_string();
        } else {
            line.push(' ');
        }
        line.push_str(tail);
    }
    out.push_str(&line);
    out.push('\n');
}

/// Renders the model in CPLEX LP format.
pub fn write_lp(model: &IlpModel) -> String {
    let st = model.stats();
    let names: Vec<String> = model.vars().iter().map(Var::to_string).collect();
    let mut out = String::new();
    let _ = writeln!(out, "\\ auxiliary entity allocation");
    let _ = writeln!(
        out,
        "\\ entities {} rules {} virtual {} horizon {} budget {}",
        st.entities,
        st.rules,
        st.virtual_entities,
        st.horizon,
        model.budget()
    );
    let _ = writeln!(
        out,
        "\\ objective constant {} (attacked entities)",
        model.objective_offset()
    );
    out.push_str("Minimize\n");
    push_terms(
        &mut out,
        "obj:",
        model.objective().iter().map(|&v| (names[v].clone(), 1)),
        "",
    );
    out.push_str("Subject To\n");
    for c in model.constraints() {
        if c.terms.is_empty() {
            // Nothing to constrain; keep the record as a comment.
            let _ = writeln!(out, "\\ {}: 0 {} {}", c.name, c.sense.symbol(), c.rhs);
            continue;
        }
        let tail = format!("{} {}", c.sense.symbol(), c.rhs);
        push_terms(
            &mut out,
            &format!("{}:", c.name),
            c.terms.iter().map(|&(v, a)| (names[v].clone(), a)),
            &tail,
        );
    }
    out.push_str("Bounds\n");
    for n in &names {
        let _ = writeln!(out, " 0 <= {n} <= 1");
    }
    out.push_str("Binary\n");
    let mut line = String::new();
    for n in &names {
        if !line.is_empty() && line.len() + 1 + n.len() > WIDTH {
            out.push_str(&line);
            out.push('\n');
            line.clear();
        }
        line.push(' ');
        line.push_str(n);
    }
    if !line.is_empty() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

/// Variable name to `{kind, entity, step}` / `{kind, id, step, owner, literals}`
/// / `{kind, label, target}`.
pub fn variable_map(model: &IlpModel) -> Value {
    let mut vars = Map::new();
    for v in model.vars() {
        let entry = match *v {
            Var::Entity { entity, step } => json!({
                "kind": "entity",
                "entity": entity.to_string(),
                "step": step,
            }),
            Var::Virtual { id, step } => {
                let ve = &model.virtual_entities()[id - 1];
                let owner = model
                    .rules()
                    .iter()
                    .find(|r| r.label == ve.owner_label)
                    .map(|r| r.target.to_string());
                json!({
                    "kind": "virtual",
                    "id": id,
                    "step": step,
                    "owner": owner,
                    "literals": ve.literals.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                })
            }
            Var::Modify { label } => {
                let target = model
                    .rules()
                    .iter()
                    .find(|r| r.label == label)
                    .map(|r| r.target.to_string());
                json!({ "kind": "modify", "label": label, "target": target })
            }
        };
        vars.insert(v.to_string(), entry);
    }
    json!({
        "horizon": model.horizon(),
        "budget": model.budget(),
        "objective_offset": model.objective_offset(),
        "attacked": model.attacked().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "stats": model.stats(),
        "variables": vars,
    })
}

impl Sense {
    #[cfg(test)]
    fn parse(s: &str) -> Option<Sense> {
        match s {
            "<=" => Some(Sense::Le),
            ">=" => Some(Sense::Ge),
            "=" => Some(Sense::Eq),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::ilp::build_ilp;
    use crate::model::{parse_network, EntityId};

    const EXAMPLE: &str = "a1 <- b1 + b2\na2 <- b1 b2\na3 <- b2 + b1 b3\na4 <- b3\na5\nb1 <- a2\nb2 <- a2\nb3 <- a4\n";

    type Row = (Vec<(i64, String)>, Sense, i64);

    struct Parsed {
        objective: Vec<String>,
        rows: BTreeMap<String, Row>,
        bounds: usize,
        binaries: Vec<String>,
    }

    /// Minimal reader for the subset of LP that the writer emits.
    fn parse_lp(text: &str) -> Parsed {
        let mut section = "";
        let mut logical: Vec<(String, String)> = Vec::new();
        for raw in text.lines() {
            if raw.starts_with('\\') {
                continue;
            }
            if let s @ ("Minimize" | "Subject To" | "Bounds" | "Binary" | "End") = raw.trim() {
                section = s;
                continue;
            }
            assert!(raw.starts_with(' '), "unexpected line {raw:?}");
            if raw.starts_with("   ")
                && !raw.starts_with("    ")
                && section != "Bounds"
                && section != "Binary"
            {
                logical.last_mut().expect("continuation").1.push_str(raw);
            } else {
                logical.push((section.to_string(), raw.to_string()));
            }
        }
        let mut p = Parsed {
            objective: Vec::new(),
            rows: BTreeMap::new(),
            bounds: 0,
            binaries: Vec::new(),
        };
        for (section, line) in logical {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match section.as_str() {
                "Minimize" => {
                    assert_eq!(toks[0], "obj:");
                    p.objective = toks[1..]
                        .iter()
                        .filter(|t| **t != "+")
                        .map(|t| t.to_string())
                        .collect();
                }
                "Subject To" => {
                    let name = toks[0].trim_end_matches(':').to_string();
                    let n = toks.len();
                    let sense = Sense::parse(toks[n - 2]).expect("sense");
                    let rhs: i64 = toks[n - 1].parse().unwrap();
                    let mut terms = Vec::new();
                    let mut sign = 1;
                    let mut coef = 1;
                    for t in &toks[1..n - 2] {
                        match *t {
                            "+" => sign = 1,
                            "-" => sign = -1,
                            t if t.parse::<i64>().is_ok() => coef = t.parse().unwrap(),
                            t => {
                                let (s2, name) = match t.strip_prefix('-') {
                                    Some(rest) => (-1, rest),
                                    None => (1, t),
                                };
                                terms.push((sign * s2 * coef, name.to_string()));
                                sign = 1;
                                coef = 1;
                            }
                        }
                    }
                    assert!(p.rows.insert(name, (terms, sense, rhs)).is_none());
                }
                "Bounds" => p.bounds += 1,
                "Binary" => p.binaries.extend(toks.iter().map(|t| t.to_string())),
                other => panic!("line outside a section: {other}"),
            }
        }
        p
    }

    fn model() -> IlpModel {
        let net = parse_network(EXAMPLE).unwrap();
        let attacked: BTreeSet<EntityId> =
            ["b2", "b3"].iter().map(|n| n.parse().unwrap()).collect();
        build_ilp(&net, &attacked, 1).unwrap()
    }

    #[test]
    fn sections_in_order() {
        let text = write_lp(&model());
        let heads: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with(' ') && !l.starts_with('\\'))
            .collect();
        assert_eq!(heads, ["Minimize", "Subject To", "Bounds", "Binary", "End"]);
        assert!(text.lines().all(|l| l.len() <= WIDTH), "line too long");
    }

    #[test]
    fn reparse_matches_the_model() {
        let m = model();
        let p = parse_lp(&write_lp(&m));
        let st = m.stats();
        assert_eq!(p.rows.len(), st.constraints());
        assert_eq!(p.bounds, st.variables);
        assert_eq!(p.binaries.len(), st.variables);
        assert_eq!(p.objective.len(), st.entities);
        let names: Vec<String> = m.vars().iter().map(|v| v.to_string()).collect();
        for c in m.constraints() {
            let (terms, sense, rhs) = &p.rows[&c.name];
            let expect: Vec<(i64, String)> = c
                .terms
                .iter()
                .map(|&(v, a)| (a, names[v].clone()))
                .collect();
            assert_eq!(terms, &expect, "{}", c.name);
            assert_eq!((*sense, *rhs), (c.sense, c.rhs), "{}", c.name);
        }
        let budget = &p.rows["budget"];
        assert_eq!(budget.0.len(), 8);
        assert_eq!((budget.1, budget.2), (Sense::Eq, 1));
    }

    #[test]
    fn deterministic() {
        assert_eq!(write_lp(&model()), write_lp(&model()));
    }

    #[test]
    fn sidecar_maps_every_variable() {
        let m = model();
        let map = variable_map(&m);
        let vars = map["variables"].as_object().unwrap();
        assert_eq!(vars.len(), m.vars().len());
        assert_eq!(
            vars["y_2_0"],
            json!({"kind": "entity", "entity": "b2", "step": 0})
        );
        assert_eq!(
            vars["m_2"],
            json!({"kind": "modify", "label": 2, "target": "a2"})
        );
        assert_eq!(vars["c_1_3"]["owner"], "a2");
        assert_eq!(vars["c_1_3"]["literals"], json!(["b1", "b2"]));
        assert_eq!(map["objective_offset"], -2);
    }

    #[test]
    fn empty_network_is_still_a_document() {
        let net = parse_network("").unwrap();
        let m = build_ilp(&net, &BTreeSet::new(), 0).unwrap();
        let text = write_lp(&m);
        let p = parse_lp(&text);
        assert!(p.rows.is_empty() && p.objective.is_empty());
        assert!(text.contains("\\ budget: 0 = 0"));
    }
}
