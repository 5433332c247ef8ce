//! Checks a fixture's `expected` block against fresh computations.

use crate::error::Result;
use crate::fixture::Fixture;
use crate::nest::{bijection_report, lct_axis, newton_nest};
use crate::rational::fmt_q_list;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} {}", self.name, self.detail)
    }
}

fn line(name: &str, got: String, want: String) -> CheckLine {
    CheckLine {
        name: name.to_string(),
        pass: got == want,
        detail: if got == want { got } else { format!("got {got}, expected {want}") },
    }
}

/// One line per expected value present in the fixture, in a fixed order.
pub fn run_selftest(f: &Fixture) -> Result<Vec<CheckLine>> {
    let t = f.tuple()?;
    let g = t.graph();
    let mut out = vec![CheckLine { name: "valid".into(), pass: true, detail: format!("n={} r={}", g.n(), t.r()) }];
    let Some(exp) = &f.expected else {
        return Ok(out);
    };
    if let Some(k) = &exp.canonical {
        out.push(line("canonical", g.canonical().to_string(), fmt_q_list(k)));
    }
    if let Some(z) = &exp.fundamental_cycle {
        let want = z.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        out.push(line("fundamental_cycle", g.fundamental_cycle().to_string(), want));
    }
    if let Some(s) = &exp.singularity {
        out.push(line("singularity", g.singularity_class().to_string(), s.clone()));
    }
    if let Some(l) = &exp.lct {
        let got = (0..t.r()).map(|i| lct_axis(&t, i)).collect::<Result<Vec<_>>>()?;
        out.push(line("lct", fmt_q_list(&got), fmt_q_list(l)));
    }
    if let Some(n) = &exp.nest {
        let got: Vec<String> = newton_nest(&t)?.iter().map(|j| format!("E{}", j + 1)).collect();
        let want: Vec<String> = n.iter().map(|j| format!("E{j}")).collect();
        out.push(line("nest", got.join(","), want.join(",")));
    }
    if exp.lc_facets.is_some() || exp.verdict.is_some() {
        let rep = bijection_report(&t)?;
        if let Some(c) = exp.lc_facets {
            out.push(line("lc_facets", rep.lc_facets.len().to_string(), c.to_string()));
        }
        if let Some(v) = &exp.verdict {
            out.push(line("verdict", rep.verdict.to_string(), v.clone()));
        }
    }
    Ok(out)
}
