//! Runs the four certificate pipelines and prints one line per check.

use symstab::certificates::{certify_k2111, certify_k311, certify_krt, certify_kst, CertificateReport};

fn show(report: &CertificateReport) {
    println!("{}: {:?}", report.target, report.verdict);
    for check in &report.checks {
        println!("  [{}] {}", if check.pass { "ok" } else { "FAIL" }, check.name);
    }
    for note in &report.notes {
        println!("  note: {note}");
    }
    if let Some(lambda) = &report.lambda_max {
        println!("  lambda_max = {lambda}");
    }
}

fn main() -> Result<(), symstab::error::Error> {
    show(&certify_kst(1, 4)?);
    show(&certify_krt(2, 3)?);
    show(&certify_k2111()?);
    let k311 = certify_k311()?;
    show(&k311);
    println!("{}", serde_json::to_string_pretty(&k311.checks[..3])?);
    Ok(())
}
