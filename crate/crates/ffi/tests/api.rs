use std::ffi::CStr;
use std::ptr;

use pairpoly_ffi::*;

fn text(p: *const std::ffi::c_char) -> String {
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn betti_handle() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(pairpoly_betti_new(2, 5, 5, 8, &mut h), PairpolyStatus::Ok);
        assert_eq!(pairpoly_betti_len(h), 15);
        let mut got = Vec::new();
        for k in 0..15 {
            let mut b = -1;
            assert_eq!(pairpoly_betti_get(h, k, &mut b), PairpolyStatus::Ok);
            got.push(b);
        }
        assert_eq!(got, [1, 4, 7, 8, 8, 8, 8, 8, 8, 8, 8, 8, 7, 4, 1]);
        assert!(pairpoly_betti_checks_pass(h));
        let mut b = 0;
        assert_eq!(pairpoly_betti_get(h, 15, &mut b), PairpolyStatus::OutOfRange);

        let json = pairpoly_betti_to_json(h, true);
        let v: serde_json::Value = serde_json::from_str(&text(json)).unwrap();
        assert_eq!(v["dim"], 7);
        assert!(v["ledger"].is_array());
        pairpoly_string_free(json);
        pairpoly_betti_free(h);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(pairpoly_betti_new(2, 5, 2, 8, &mut h), PairpolyStatus::Domain);
        assert!(h.is_null());
        assert!(text(pairpoly_last_error()).contains("d/2 < N"));
        assert_eq!(pairpoly_betti_new(2, 5, 5, 0, &mut h), PairpolyStatus::Domain);
        assert_eq!(pairpoly_betti_new(2, 5, 5, 8, ptr::null_mut()), PairpolyStatus::NullPointer);
        assert_eq!(text(pairpoly_status_name(PairpolyStatus::NonGeneric)), "NON_GENERIC");
        // null handles are tolerated by the accessors
        assert_eq!(pairpoly_betti_len(ptr::null()), 0);
        pairpoly_betti_free(ptr::null_mut());
    }
}

#[test]
fn flip_and_closed_form_series() {
    unsafe {
        let mut flip = ptr::null_mut();
        assert_eq!(pairpoly_flip_difference(2, 5, 4, 8, true, &mut flip), PairpolyStatus::Ok);
        let s = pairpoly_series_to_string(flip);
        assert_eq!(text(s), "-t^2 - 4t^3 - 2t^4 - 4t^5 - 2t^6 - 4t^7 - t^8");
        pairpoly_string_free(s);
        assert_eq!(pairpoly_series_len(flip), 23);
        pairpoly_series_free(flip);

        let mut closed = ptr::null_mut();
        let mut betti = ptr::null_mut();
        assert_eq!(pairpoly_closed_form(3, 7, 5, 8, &mut closed), PairpolyStatus::Ok);
        assert_eq!(pairpoly_betti_new(3, 7, 5, 8, &mut betti), PairpolyStatus::Ok);
        for k in 0..pairpoly_betti_len(betti) {
            let (mut a, mut b) = (0, 0);
            pairpoly_series_get(closed, k, &mut a);
            pairpoly_betti_get(betti, k, &mut b);
            assert_eq!(a, b, "t^{k}");
        }
        pairpoly_series_free(closed);
        pairpoly_betti_free(betti);

        let mut bad = ptr::null_mut();
        assert_eq!(pairpoly_flip_difference(2, 5, 5, 8, false, &mut bad), PairpolyStatus::Domain);
    }
}

#[test]
fn strata_handle() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(pairpoly_strata_new(2, 5, 22, 5, 6, &mut h), PairpolyStatus::Ok);
        assert_eq!(pairpoly_strata_len(h), 9);
        let mut rows = Vec::new();
        for i in 0..9 {
            let (mut class, mut j, mut num, mut den) = (ptr::null(), 0, 0, 0);
            assert_eq!(pairpoly_strata_get(h, i, &mut class, &mut j, &mut num, &mut den), PairpolyStatus::Ok);
            let j = if j == i64::MIN { None } else { Some(j) };
            rows.push((text(class), j, num, den));
        }
        assert_eq!(rows[0], ("OPEN".to_string(), None, 0, 1));
        assert_eq!(rows[2], ("IIminus".to_string(), Some(5), 3, 5));
        assert_eq!(rows[4], ("Ia_SS".to_string(), None, 19, 10));
        let (mut class, mut j, mut num, mut den) = (ptr::null(), 0, 0, 0);
        assert_eq!(pairpoly_strata_get(h, 9, &mut class, &mut j, &mut num, &mut den), PairpolyStatus::OutOfRange);
        pairpoly_strata_free(h);

        let mut wall = ptr::null_mut();
        assert_eq!(pairpoly_strata_new(2, 5, 9, 2, 6, &mut wall), PairpolyStatus::NonGeneric);
        assert!(text(pairpoly_last_error()).contains("C_5"));
    }
}
