//! Verification report types and the check runner. Checks within a suite
//! run in parallel; records are assembled in their declaration order so a
//! report is byte-identical for identical (version, seed, flags).

use serde::Serialize;

/// Outcome data of one executed check.
pub struct CheckResult {
    pub ok: bool,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub detail: Option<String>,
}

impl CheckResult {
    /// A scalar comparison: passes when both renderings agree.
    pub fn scalar(lhs: impl ToString, rhs: impl ToString) -> Self {
        let l = lhs.to_string();
        let r = rhs.to_string();
        CheckResult {
            ok: l == r,
            lhs: Some(l),
            rhs: Some(r),
            detail: None,
        }
    }

    /// A boolean verdict with an optional first-mismatch description.
    pub fn flag(ok: bool, detail: Option<String>) -> Self {
        CheckResult {
            ok,
            lhs: None,
            rhs: None,
            detail,
        }
    }

    /// A failure caused by a computation error.
    pub fn error(message: impl ToString) -> Self {
        CheckResult {
            ok: false,
            lhs: None,
            rhs: None,
            detail: Some(message.to_string()),
        }
    }
}

/// One check to execute: a stable identifier, a human-readable statement of
/// the identity, the parameter draw it runs on, and the closure that
/// produces the result.
pub struct Check {
    pub id: String,
    pub description: String,
    pub params: String,
    pub run: Box<dyn FnOnce() -> CheckResult + Send>,
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        description: impl Into<String>,
        params: impl Into<String>,
        run: impl FnOnce() -> CheckResult + Send + 'static,
    ) -> Self {
        Check {
            id: id.into(),
            description: description.into(),
            params: params.into(),
            run: Box::new(run),
        }
    }
}

/// Serialized record of one executed check.
#[derive(Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub description: String,
    pub params: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Result of one suite.
#[derive(Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub ok: bool,
    pub checks: Vec<CheckRecord>,
}

/// Result of a `verify` invocation.
#[derive(Serialize)]
pub struct VerifyReport {
    pub version: String,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub ok: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn assemble(seed: u64, suites: Vec<SuiteReport>) -> Self {
        let passed = suites.iter().map(|s| s.passed).sum();
        let failed = suites.iter().map(|s| s.failed).sum();
        VerifyReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            passed,
            failed,
            ok: failed == 0,
            suites,
        }
    }
}

/// Runs every check of one suite in parallel and assembles the records in
/// declaration order.
pub fn run_suite(name: &str, checks: Vec<Check>) -> SuiteReport {
    let mut meta = Vec::with_capacity(checks.len());
    let results: Vec<CheckResult> = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(checks.len());
        for check in checks {
            meta.push((check.id, check.description, check.params));
            handles.push(scope.spawn(check.run));
        }
        handles
            .into_iter()
            .map(|h| {
                h.join().unwrap_or_else(|_| {
                    CheckResult::error("check panicked; see stderr for the backtrace")
                })
            })
            .collect()
    });

    let mut records = Vec::with_capacity(meta.len());
    let mut passed = 0;
    let mut failed = 0;
    for ((id, description, params), result) in meta.into_iter().zip(results) {
        if result.ok {
            passed += 1;
        } else {
            failed += 1;
        }
        records.push(CheckRecord {
            id,
            description,
            params,
            status: if result.ok { "pass" } else { "fail" }.to_string(),
            lhs: result.lhs,
            rhs: result.rhs,
            detail: result.detail,
        });
    }
    SuiteReport {
        suite: name.to_string(),
        passed,
        failed,
        ok: failed == 0,
        checks: records,
    }
}
