//! Human-readable rendering. Everything here reads the JSON form of the report,
//! so the text never shows anything the JSON lacks.

use serde_json::Value;

fn s(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        Value::Null => String::from("none"),
        other => other.to_string(),
    }
}

fn point_type(b: &Value) -> String {
    let (r, a) = (b["r"].as_u64().unwrap_or(0), b["a"].as_u64().unwrap_or(0));
    format!("1/{r}(1,{a},{})", r.saturating_sub(a))
}

fn join(v: &Value, f: impl Fn(&Value) -> String) -> String {
    v.as_array().map(|xs| xs.iter().map(f).collect::<Vec<_>>().join(", ")).unwrap_or_default()
}

fn candidate_lines(c: &Value, out: &mut String) {
    let weights = join(&c["weights"], |w| s(&w["weight"]));
    let names = join(&c["weights"], |w| s(&w["name"]));
    out.push_str(&format!("candidate {} in P({weights}) with coordinates {names}\n", s(&c["id"])));
    out.push_str(&format!("  equation degrees {}\n", join(&c["eq_degrees"], s)));
    out.push_str(&format!("  (-K_X)^3 = {}/{}\n", s(&c["k3"]["num"]), s(&c["k3"]["den"])));
    out.push_str(&format!("  basket {}\n", join(&c["basket"], |b| format!("{} x {}", s(&b["count"]), point_type(b)))));
}

fn check_line(c: &Value) -> String {
    let holds = if c["holds"].as_bool() == Some(true) { "holds" } else { "fails" };
    match c["kind"].as_str() {
        Some("compare") => format!("{}: {} {} {} {holds}", s(&c["label"]), s(&c["lhs"]), s(&c["relation"]), s(&c["rhs"])),
        Some("negative-for-all") => format!(
            "{}: {} + ({})*e < 0 for all integers e >= {} {holds}",
            s(&c["label"]),
            s(&c["expression"]["constant"]),
            s(&c["expression"]["slope"]),
            s(&c["from"])
        ),
        _ => format!("{} {holds}", c),
    }
}

fn stratum_summary(cert: &Value) -> String {
    format!("{} on Pi({})", s(&cert["kind"]), join(&cert["zeroed"], s))
}

fn certificate_line(sub: &Value, indent: &str, out: &mut String) {
    let line = match sub["kind"].as_str() {
        Some("stratum") => format!(
            "stratum ({}): {} required, {}",
            s(&sub["role"]),
            s(&sub["requirement"]),
            stratum_summary(&sub["certificate"])
        ),
        Some("position") => format!(
            "position p_{}: {} ({})",
            s(&sub["coordinate"]),
            if sub["movable"].as_bool() == Some(true) { "movable" } else { "not movable" },
            s(&sub["reason"])
        ),
        Some("order-bound") => {
            let b = &sub["bound"];
            format!("ord_E({}) >= {} with D ~ -{} K_X", s(&b["coordinate"]), s(&b["bound"]), s(&b["n"]))
        }
        Some("pencil") => {
            let p = &sub["pencil"];
            format!(
                "pencil <{}> ~ -{} K_X with ord_E = {} (exact via {})",
                join(&p["generators"], s),
                s(&p["n"]),
                s(&p["order"]),
                s(&p["exact_by"])
            )
        }
        Some("branch") => {
            let b = &sub["branch"];
            out.push_str(&format!("{indent}branch {}: {}\n", s(&b["label"]), join(&b["assumptions"], s)));
            verdict_lines(&b["verdict"], &format!("{indent}  "), out);
            return;
        }
        Some("cluster") => {
            let c = &sub["certificate"];
            format!("{} cluster certificate, holds: {}", s(&c["format"]), s(&c["holds"]))
        }
        Some(kind) => format!("{kind}: {}", compact_without_kind(sub)),
        None => sub.to_string(),
    };
    out.push_str(&format!("{indent}{line}\n"));
}

fn compact_without_kind(v: &Value) -> String {
    let mut v = v.clone();
    if let Some(o) = v.as_object_mut() {
        o.remove("kind");
    }
    v.to_string()
}

/// One verdict: a report center record or a nested branch verdict.
fn verdict_lines(v: &Value, indent: &str, out: &mut String) {
    let label = match &v["center"] {
        Value::String(c) => c.clone(),
        center => center["basket_ref"].as_object().map(|_| point_type(&center["basket_ref"])).unwrap_or_else(|| s(&center["kind"])),
    };
    let position = v.get("position").or_else(|| v["center"].get("coordinate_position")).filter(|p| !p.is_null());
    let at = position.map(|p| format!(" at p_{}", s(p))).unwrap_or_default();
    out.push_str(&format!("{indent}{label}{at}: {} by {}\n", s(&v["status"]), s(&v["lemma"])));
    let values = if v.get("values").is_some() { &v["values"] } else { &v["computed_values"] };
    for nv in values.as_array().into_iter().flatten() {
        out.push_str(&format!("{indent}  {} = {}\n", s(&nv["name"]), s(&nv["value"])));
    }
    for c in v["checks"].as_array().into_iter().flatten() {
        out.push_str(&format!("{indent}  check {}\n", check_line(c)));
    }
    let subs = if v.get("certificate").is_some() { &v["certificate"] } else { &v["sub_certificates"] };
    for sub in subs.as_array().into_iter().flatten() {
        certificate_line(sub, &format!("{indent}  "), out);
    }
    for n in v["notes"].as_array().into_iter().flatten() {
        out.push_str(&format!("{indent}  note: {}\n", s(n)));
    }
}

fn overall_line(o: &Value) -> String {
    let verdict = s(&o["verdict"]);
    match o.get("centers").or_else(|| o.get("violations")) {
        Some(list) => format!("overall: {verdict} [{}]", join(list, s)),
        None => format!("overall: {verdict}"),
    }
}

/// Text form of a report given as JSON.
pub fn render_report(r: &Value) -> String {
    let mut out = format!("{} report by {} {}\n", s(&r["schema"]), s(&r["tool"]["name"]), s(&r["tool"]["version"]));
    candidate_lines(&r["candidate"], &mut out);
    let o = &r["options"];
    out.push_str(&format!(
        "strategy {}; isolating product {}; format {}; q in S6 assumed: {}\n",
        s(&r["strategy"]),
        s(&o["isolating_product"]),
        s(&o["format"]),
        s(&o["assume_q_in_s6"])
    ));
    if let Some(t) = r.get("timing") {
        out.push_str(&format!("elapsed {} ms\n", s(&t["elapsed_ms"])));
    }
    if let Some(centers) = r["centers"].as_array().filter(|c| !c.is_empty()) {
        out.push_str("\ncenters\n");
        for c in centers {
            verdict_lines(c, "  ", &mut out);
        }
    }
    if let Some(a) = r["assumptions"].as_array().filter(|a| !a.is_empty()) {
        out.push_str("\nassumptions\n");
        for x in a {
            out.push_str(&format!("  {} ({})\n", s(&x["statement"]), s(&x["provenance"])));
        }
    }
    out.push('\n');
    out.push_str(&overall_line(&r["overall"]));
    out.push('\n');
    out
}

fn tree(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        tree(x, indent + 2, out);
                    }
                    Value::Array(a) if !a.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        tree(x, indent + 2, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", s(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match x {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        tree(x, indent + 2, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", s(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", s(v))),
    }
}

/// Summary of one center followed by its full certificate transcript.
pub fn render_explain(candidate: &str, record: &Value) -> String {
    let mut out = format!("{candidate}\n");
    verdict_lines(record, "", &mut out);
    out.push_str("\ntranscript\n");
    tree(&record["certificate"], 2, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::build_report;
    use fano_rigidity_core::candidate::lookup;
    use fano_rigidity_core::exclusion::VerifyOptions;
    use fano_rigidity_core::explicit::ClusterFormat;

    fn collect_values(v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for key in ["values", "computed_values"] {
                    for nv in m.get(key).and_then(Value::as_array).into_iter().flatten() {
                        out.push((s(&nv["name"]), s(&nv["value"])));
                    }
                }
                m.values().for_each(|x| collect_values(x, out));
            }
            Value::Array(a) => a.iter().for_each(|x| collect_values(x, out)),
            _ => {}
        }
    }

    #[test]
    fn text_contains_every_computed_value() {
        for (id, format) in [("#25", None), ("#166", None), ("#282", Some(ClusterFormat::G2)), ("#308", None)] {
            let opts = VerifyOptions { format, isolating_product: Some(20), ..Default::default() };
            let r = build_report(&lookup(id).unwrap(), &opts, None).unwrap().to_value();
            let text = render_report(&r);
            let mut values = Vec::new();
            collect_values(&r["centers"], &mut values);
            assert!(values.len() > 10, "{id}");
            for (name, value) in values {
                assert!(text.contains(&format!("{name} = {value}")), "{id}: {name} = {value} missing");
            }
        }
    }

    #[test]
    fn unresolved_centers_are_listed() {
        let r = build_report(&lookup("#282").unwrap(), &VerifyOptions::default(), None).unwrap().to_value();
        assert!(render_report(&r).ends_with("overall: UNRESOLVED [1/6(1,1,5)]\n"));
    }

    #[test]
    fn explain_shows_branches_and_transcript() {
        let r = build_report(&lookup("#308").unwrap(), &VerifyOptions::default(), None).unwrap();
        let rec = serde_json::to_value(r.center("1/5").unwrap()).unwrap();
        let text = render_explain("#308", &rec);
        assert!(text.starts_with("#308\n1/5(1,2,3) at p_q: excluded by case-split\n"), "{text}");
        assert!(text.contains("branch A"));
        assert!(text.contains("N.(-K_Y)^2 = 0"));
        assert!(text.contains("(-K_Y.S~.L~) = 0"));
        assert!(text.contains("\ntranscript\n"));
    }
}
