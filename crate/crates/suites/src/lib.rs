//! Reference oracles, corpora and acceptance suites.

pub mod corpus;
pub mod criteria;
pub mod oracle;

use std::fmt;

/// Outcome of one suite: how many comparisons ran and which failed.
#[derive(Clone, Debug)]
pub struct Report {
    pub id: u8,
    pub name: &'static str,
    pub title: &'static str,
    pub checked: u64,
    pub failed: u64,
    /// The first few failure messages.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

const KEPT_FAILURES: usize = 10;

impl Report {
    pub fn new(id: u8, name: &'static str, title: &'static str) -> Self {
        Report {
            id,
            name,
            title,
            checked: 0,
            failed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(msg());
            }
        }
    }

    pub fn fail(&mut self, msg: String) {
        self.check(false, || msg);
    }

    pub fn note(&mut self, msg: String) {
        self.notes.push(msg);
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{verdict}] {}. {} ({}): {} checks, {} failed",
            self.id, self.name, self.title, self.checked, self.failed
        )?;
        for n in &self.notes {
            write!(f, "\n    {n}")?;
        }
        for m in &self.failures {
            write!(f, "\n    failure: {m}")?;
        }
        Ok(())
    }
}

/// Suite names in criterion order.
pub const SUITES: [&str; 9] = [
    "flatness",
    "empty-team",
    "lax-translation",
    "strict-translation",
    "phi-c",
    "atm-chain",
    "dqbf-chain",
    "divergence",
    "gfp",
];

pub fn run_suite(name: &str) -> Option<Report> {
    Some(match name {
        "flatness" => criteria::flatness(),
        "empty-team" => criteria::empty_team(),
        "lax-translation" => criteria::lax_translation(),
        "strict-translation" => criteria::strict_translation(),
        "phi-c" => criteria::phi_c(),
        "atm-chain" => criteria::atm_chain(),
        "dqbf-chain" => criteria::dqbf_chain(),
        "divergence" => criteria::divergence(),
        "gfp" => criteria::gfp(),
        _ => return None,
    })
}
