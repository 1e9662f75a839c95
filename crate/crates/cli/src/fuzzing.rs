//! Entry points shared by the fuzz targets and the seed-replay test.
//! Each must return without panicking on arbitrary bytes.

use engel_core::algebra::PbwPolynomial;
use engel_core::dispersion::DispersionReport;

use crate::RunConfig;

pub fn pbw_text(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = text.parse::<PbwPolynomial>() {
        let again: PbwPolynomial = p.to_string().parse().expect("canonical form parses");
        assert_eq!(again, p);
    }
}

pub fn run_config_json(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = RunConfig::from_json(text) {
        let back = RunConfig::from_json(&serde_json::to_string(&c).expect("config serializes")).expect("round trip validates");
        assert_eq!(back, c);
        let _ = c.nu_grid().len();
    }
}

pub fn dispersion_report_json(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = DispersionReport::from_json(text) {
        let back = DispersionReport::from_json(&serde_json::to_string(&r).expect("report serializes")).expect("round trip validates");
        assert_eq!(back, r);
    }
}
