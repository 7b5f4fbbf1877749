//! Amplitude correlations of the four outputs relative to shot noise.

use cvcluster::measurement::table1_report;
use cvcluster::optics::CylindricalMode;

fn main() -> cvcluster::Result<()> {
    let input_db = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(-1.9);
    for kind in [CylindricalMode::RPlus, CylindricalMode::APlus] {
        let report = table1_report(kind, input_db, None)?;
        println!("{kind:?} input at {input_db} dB");
        for row in &report.rows {
            let reference = row
                .paper_db
                .map(|d| format!("{d:+.1}"))
                .unwrap_or_else(|| "-".into());
            println!(
                "  {:<9} {:+.3} dB  (reference {reference})",
                row.label, row.predicted_db
            );
        }
    }
    Ok(())
}
