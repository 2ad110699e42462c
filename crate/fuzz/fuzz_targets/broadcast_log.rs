#![no_main]
use lacent::eval::{parse_broadcast_log, write_broadcast_log};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(log) = parse_broadcast_log(text) {
        let mut buf = Vec::new();
        write_broadcast_log(&log, &mut buf).expect("write to memory");
        let back = parse_broadcast_log(std::str::from_utf8(&buf).unwrap()).expect("reparse");
        assert_eq!(back.record_count(), log.record_count());
    }
});
