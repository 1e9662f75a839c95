#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| engel_cli::fuzzing::dispersion_report_json(data));
