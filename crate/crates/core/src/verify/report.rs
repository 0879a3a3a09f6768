use std::fmt;

use crate::numeric::Point;
use crate::Rational;

/// One named comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub name: String,
    /// Exact iterates in the order they were produced, with their labels.
    pub iterates: Vec<(String, Point<Rational>)>,
    pub v0: Rational,
    pub v1: Rational,
    /// `𝒱₁ > 𝒱₀`.
    pub monotonicity_violated: bool,
    pub checks: Vec<Check>,
}

impl CounterexampleReport {
    pub(crate) fn new(name: &str, v0: Rational, v1: Rational) -> Self {
        let monotonicity_violated = v1 > v0;
        Self { name: name.to_string(), iterates: Vec::new(), v0, v1, monotonicity_violated, checks: Vec::new() }
    }

    pub(crate) fn check(&mut self, name: impl Into<String>, expected: impl fmt::Display, computed: impl fmt::Display, pass: bool) {
        self.checks.push(Check { name: name.into(), expected: expected.to_string(), computed: computed.to_string(), pass });
    }

    pub(crate) fn check_exact<T: PartialEq + fmt::Display>(&mut self, name: &str, expected: &T, computed: &T) {
        self.check(name, expected, computed, expected == computed);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Machine-readable verdict: a header, then one tab-separated line per check.
    pub fn verdict_lines(&self) -> String {
        let mut out = String::from("name\texpected\tcomputed\tpass\n");
        for c in &self.checks {
            out.push_str(&format!("{}/{}\t{}\t{}\t{}\n", self.name, c.name, c.expected, c.computed, c.pass));
        }
        out
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, if self.passed() { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            writeln!(f, "  [{mark}] {}: computed {} (expected {})", c.name, c.computed, c.expected)?;
        }
        Ok(())
    }
}

pub(crate) fn fmt_point(p: &Point<Rational>) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}
