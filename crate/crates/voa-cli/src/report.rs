//! Report structures shared by every subcommand, with two renderings: a
//! human text form and a structured JSON form. The structured form contains
//! no clocks, hostnames, or other varying data, so identical invocations
//! produce byte-identical output.

use serde::Serialize;

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub lattice: LatticeInfo,
    pub ring: String,
    /// (key, value) pairs in fixed insertion order.
    pub parameters: Vec<(String, String)>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

#[derive(Serialize)]
pub struct LatticeInfo {
    pub name: String,
    pub rank: usize,
    pub det: String,
    pub cartan_type: String,
    pub root_count: usize,
}

#[derive(Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// The mathematical statement this check instantiates.
    pub anchor: String,
    pub instances: usize,
    pub failures: usize,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CheckRecord {
    pub fn new(name: &str, anchor: &str) -> Self {
        CheckRecord {
            name: name.to_string(),
            anchor: anchor.to_string(),
            instances: 0,
            failures: 0,
            passed: true,
            details: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            self.passed = false;
            if self.details.len() < 8 {
                self.details.push(detail());
            }
        }
    }
}

#[derive(Serialize)]
pub struct Summary {
    pub total_checks: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(command: &str, lattice: LatticeInfo, ring: String) -> Self {
        Report {
            command: command.to_string(),
            lattice,
            ring,
            parameters: Vec::new(),
            checks: Vec::new(),
            summary: Summary {
                total_checks: 0,
                passed: 0,
                failed: 0,
            },
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    pub fn seal(&mut self) {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        self.summary = Summary {
            total_checks: self.checks.len(),
            passed,
            failed: self.checks.len() - passed,
        };
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} on {} (rank {}, det {}, type {}, {} roots) over {}\n",
            self.command,
            self.lattice.name,
            self.lattice.rank,
            self.lattice.det,
            self.lattice.cartan_type,
            self.lattice.root_count,
            self.ring
        ));
        if !self.parameters.is_empty() {
            let params: Vec<String> = self
                .parameters
                .iter()
                .map(|(k, v)| format!("{}={}", k, v))
                .collect();
            out.push_str(&format!("  parameters: {}\n", params.join(" ")));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {} ({}): {} instances, {} failures\n",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.anchor,
                c.instances,
                c.failures
            ));
            for d in &c.details {
                out.push_str(&format!("      {}\n", d));
            }
        }
        out.push_str(&format!(
            "  checks: {} total, {} passed, {} failed\n",
            self.summary.total_checks, self.summary.passed, self.summary.failed
        ));
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}
