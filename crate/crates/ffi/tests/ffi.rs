use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use coverforge_ffi::*;

const D3_GENUS_5: &str = r#"{"group":{"kind":"dihedral","n":3},"base_genus":0,"branches":[
    {"label":"t1","order":2,"element":"b"},
    {"label":"t2","order":2,"element":"b"},
    {"label":"t3","order":2,"element":"b"},
    {"label":"t4","order":2,"element":"b"},
    {"label":"t5","order":3,"element":"a"},
    {"label":"t6","order":3,"element":"a^2"}]}"#;

fn datum(json: &str) -> *mut CfDatum {
    let text = CString::new(json).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { cf_datum_from_json(text.as_ptr(), &mut d) }, CfStatus::Ok);
    assert!(!d.is_null());
    d
}

fn last_error() -> String {
    let p = cf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn genus_and_multiplicities() {
    let d = datum(D3_GENUS_5);
    unsafe {
        let mut valid = false;
        assert_eq!(cf_datum_is_valid(d, &mut valid), CfStatus::Ok);
        assert!(valid);
        assert!(cf_last_error().is_null());

        let mut genus = 0;
        assert_eq!(cf_datum_genus(d, &mut genus), CfStatus::Ok);
        assert_eq!(genus, 5);

        let mut mu = [0u64; 3];
        let mut written = 0;
        assert_eq!(cf_datum_cw_multiplicities(d, mu.as_mut_ptr(), mu.len(), &mut written), CfStatus::Ok);
        assert_eq!(written, 3);
        assert_eq!(mu, [0, 1, 2]);

        let mut short = [0u64; 2];
        assert_eq!(
            cf_datum_cw_multiplicities(d, short.as_mut_ptr(), short.len(), &mut written),
            CfStatus::BufferTooSmall
        );
        assert_eq!(written, 3);
        assert_eq!(short, [0, 0]);
        cf_datum_free(d);
    }
}

#[test]
fn report_json() {
    let d = datum(D3_GENUS_5);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(cf_datum_report_json(d, &mut s), CfStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_string();
        cf_string_free(s);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["genus"], 5);
        assert_eq!(value["summands"][2]["irreducible"], "rho1");
        assert_eq!(value["summands"][2]["mu"], 2);
        cf_datum_free(d);
    }
}

#[test]
fn invalid_datum() {
    let d = datum(&D3_GENUS_5.replace(r#""order":3,"element":"a"}"#, r#""order":3,"element":"a^9"}"#));
    unsafe {
        let mut valid = true;
        assert_eq!(cf_datum_is_valid(d, &mut valid), CfStatus::Ok);
        assert!(!valid);
        assert!(last_error().contains("t5"), "{}", last_error());
        let mut genus = 0;
        assert_eq!(cf_datum_genus(d, &mut genus), CfStatus::InvalidDatum);
        assert!(!last_error().is_empty());
        cf_datum_free(d);
    }
}

#[test]
fn error_statuses() {
    unsafe {
        let mut d = ptr::null_mut();
        let bad = CString::new("{\"group\": ").unwrap();
        assert_eq!(cf_datum_from_json(bad.as_ptr(), &mut d), CfStatus::ParseError);
        assert!(d.is_null());
        assert!(last_error().contains("malformed"));

        assert_eq!(cf_datum_from_json(ptr::null(), &mut d), CfStatus::NullPointer);
        let invalid_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(cf_datum_from_json(invalid_utf8.as_ptr().cast(), &mut d), CfStatus::InvalidUtf8);

        let mut genus = 0;
        assert_eq!(cf_datum_genus(ptr::null(), &mut genus), CfStatus::NullPointer);
        let h = datum(D3_GENUS_5);
        assert_eq!(cf_datum_genus(h, ptr::null_mut()), CfStatus::NullPointer);
        cf_datum_free(h);

        cf_datum_free(ptr::null_mut());
        cf_group_free(ptr::null_mut());
        cf_string_free(ptr::null_mut());
    }
}

#[test]
fn group_handle() {
    let json = CString::new(r#"{"kind":"permutation","degree":4,"generators":[[2,1,3,4],[2,3,4,1]]}"#).unwrap();
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(cf_group_from_json(json.as_ptr(), &mut g), CfStatus::Ok);
        let (mut order, mut classes) = (0, 0);
        assert_eq!(cf_group_order(g, &mut order), CfStatus::Ok);
        assert_eq!(cf_group_class_count(g, &mut classes), CfStatus::Ok);
        assert_eq!((order, classes), (24, 5));

        let mut s = ptr::null_mut();
        assert_eq!(cf_group_character_table_json(g, &mut s), CfStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        cf_string_free(s);
        let degrees: Vec<u64> =
            value["irreducibles"].as_array().unwrap().iter().map(|r| r["degree"].as_u64().unwrap()).collect();
        assert_eq!(degrees.iter().map(|d| d * d).sum::<u64>(), 24);
        cf_group_free(g);

        let unknown = CString::new(r#"{"kind":"sporadic"}"#).unwrap();
        assert_eq!(cf_group_from_json(unknown.as_ptr(), &mut g), CfStatus::ParseError);
    }
}

#[test]
fn header_is_valid_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("coverforge.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "cf_datum_from_json",
        "cf_datum_genus",
        "cf_datum_cw_multiplicities",
        "cf_datum_report_json",
        "cf_group_from_json",
        "cf_last_error",
        "cf_string_free",
        "CfStatus",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    match Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c11"]).arg(&header).status() {
        Ok(status) => assert!(status.success(), "header does not compile as C"),
        Err(e) => eprintln!("skipping C compile check: {e}"),
    }
}
