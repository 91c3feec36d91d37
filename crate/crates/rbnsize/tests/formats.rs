use proptest::prelude::*;
use rbnsize::frame_io::{data_frame_from_octets, format_hex_dump, parse_hex_dump};
use rbnsize::profiles::{parse_profiles, profiles_to_toml};
use rbnsize::scenario_file::parse_scenario;
use rbnsize_core::energy::DeviceProfile;
use rbnsize_core::frame::{build_data_frame, Address};
use rbnsize_core::rbn::BitString;

fn profile() -> impl Strategy<Value = DeviceProfile> {
    ("[A-Za-z][A-Za-z0-9 ]{0,12}", 0.1f64..1e4, 0.5f64..5.0, 0.01f64..100.0, 0.0f64..1.0, 0.0f64..50.0)
        .prop_map(|(name, tau, v, hi, frac, t_on)| {
            DeviceProfile::new(name, 1000.0 / tau, tau, v, hi, hi * frac, t_on).unwrap()
        })
}

proptest! {
    #[test]
    fn profile_files_round_trip(p in profile()) {
        let text = profiles_to_toml(std::slice::from_ref(&p));
        prop_assert_eq!(parse_profiles(&text).unwrap(), vec![p]);
    }

    #[test]
    fn hex_dumps_round_trip(octets in prop::collection::vec(any::<u8>(), 0..100)) {
        prop_assert_eq!(parse_hex_dump(&format_hex_dump(&octets)).unwrap(), octets);
    }

    #[test]
    fn buffered_frames_round_trip(payload in prop::collection::vec(any::<u8>(), 0..64), src in 1u64..1000) {
        let f = build_data_frame(Address::BROADCAST, Address::from_id(src), &BitString::from_octets(&payload)).unwrap();
        let back = data_frame_from_octets(&parse_hex_dump(&format_hex_dump(&f.octets())).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn scenario_traffic_payloads(text in "[ -~&&[^\"\\\\]]{0,40}", octets in 0usize..200) {
        let file = format!(r#"
            version = 1
            profile = "tr1000"
            duration_us = 1e6
            [[node]]
            [[node]]
            [[traffic]]
            at_us = 0.0
            src = 0
            dest = 1
            payload_text = "{text}"
            [[traffic]]
            at_us = 10.0
            src = 1
            dest = 0
            payload_octets = {octets}
        "#);
        let sc = parse_scenario(&file, &DeviceProfile::builtin()).unwrap();
        prop_assert_eq!(sc.traffic[0].payload.to_octets(), text.as_bytes().to_vec());
        prop_assert_eq!(sc.traffic[1].payload.len(), 8 * octets);
    }
}
