#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| engel_cli::fuzzing::pbw_text(data));
