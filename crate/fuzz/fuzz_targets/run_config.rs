#![no_main]
use lacent_cli::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = RunConfig::parse_file(text) {
        let _ = cfg.validate();
        let again = RunConfig::parse_file(&cfg.to_file_string()).expect("written config parses");
        // NaN never compares equal; compare the text forms instead
        assert_eq!(again.to_file_string(), cfg.to_file_string());
    }
});
