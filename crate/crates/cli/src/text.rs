use std::fmt::Write;

use uproj::genset::GeneratorSetJson;
use uproj::report::{Report, Status};
use uproj::rootsystem::CascadeJson;

fn root(r: &[i64]) -> String {
    let parts: Vec<String> = r.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn cascade(c: &CascadeJson) -> String {
    let mut s = format!("cascade {}{}\n", c.series, c.rank);
    for (i, l) in c.levels.iter().enumerate() {
        let pairs: Vec<String> = l.pairing.iter().map(|(a, b)| format!("{}+{}", root(a), root(b))).collect();
        writeln!(s, "  xi{} = {}  gamma0 pairs: {}", i + 1, root(&l.xi), pairs.join(" ")).unwrap();
    }
    s
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Inconclusive => "inconclusive",
    }
}

pub fn report(r: &Report) -> String {
    let mut s = String::new();
    for c in &r.checks {
        match &c.residue {
            Some(res) => writeln!(s, "{:<12} {}: {res}", status(c.status), c.name),
            None => writeln!(s, "{:<12} {}", status(c.status), c.name),
        }
        .unwrap();
    }
    s
}

pub fn generators(g: &GeneratorSetJson) -> String {
    let mut s = format!("{} {}\n", g.kind, g.source);
    writeln!(s, "vars: {}", g.vars.join(" ")).unwrap();
    if !g.denominators.is_empty() {
        writeln!(s, "denominators: {}", g.denominators.join(", ")).unwrap();
    }
    s.push_str("generators:\n");
    for x in &g.generators {
        writeln!(s, "  {} = {}", x.name, x.text).unwrap();
    }
    s.push_str("stages:\n");
    for st in &g.stages {
        writeln!(s, "  {}: {}", st.derivation, st.q).unwrap();
    }
    s.push_str("report:\n");
    for line in report(&g.report).lines() {
        writeln!(s, "  {line}").unwrap();
    }
    s
}

pub fn eval(rows: &[(&String, &String, &Option<String>)]) -> String {
    let mut s = String::new();
    for (input, text, at) in rows {
        match at {
            Some(v) => writeln!(s, "P({input}) = {text} = {v}"),
            None => writeln!(s, "P({input}) = {text}"),
        }
        .unwrap();
    }
    s
}
