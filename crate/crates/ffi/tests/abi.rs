use std::ffi::{CStr, CString};
use std::ptr;

use fillscope_ffi::*;

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    fs_string_free(p);
    s
}

#[test]
fn construct_round_trip() {
    unsafe {
        let fam = CString::new("sigma").unwrap();
        let mut d = ptr::null_mut();
        assert_eq!(fs_construct(fam.as_ptr(), 2, 4, -1, 0, &mut d), FS_OK);
        assert_eq!(fs_diagram_validate(d), FS_OK);
        let (mut area, mut verts, mut idiam) = (0u64, 0u64, 0u64);
        assert_eq!(fs_diagram_stats(d, &mut area, &mut verts, &mut idiam), FS_OK);
        assert!(area > 0 && verts > 0 && idiam > 0);
        let mut text = ptr::null_mut();
        assert_eq!(fs_diagram_to_text(d, &mut text), FS_OK);
        let text = take(text);
        let c = CString::new(text).unwrap();
        let mut d2 = ptr::null_mut();
        assert_eq!(fs_diagram_parse(c.as_ptr(), &mut d2), FS_OK);
        let (mut b1, mut b2) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(fs_diagram_boundary(d, &mut b1), FS_OK);
        assert_eq!(fs_diagram_boundary(d2, &mut b2), FS_OK);
        let b1 = take(b1);
        assert!(b1.starts_with("s2 s2 s2 s2"));
        assert_eq!(b1, take(b2));
        fs_diagram_free(d);
        fs_diagram_free(d2);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(fs_construct(ptr::null(), 2, 1, -1, 0, &mut d), FS_ERR_NULL);
        let fam = CString::new("nope").unwrap();
        assert_eq!(fs_construct(fam.as_ptr(), 2, 1, -1, 0, &mut d), FS_ERR_PARAM);
        let msg = take(fs_last_error());
        assert!(msg.contains("unknown family"), "{msg}");
        let fam = CString::new("bpower").unwrap();
        assert_eq!(fs_construct(fam.as_ptr(), 2, 12, -1, 100, &mut d), FS_ERR_BUDGET);
        let junk = CString::new("not a diagram").unwrap();
        assert_eq!(fs_diagram_parse(junk.as_ptr(), &mut d), FS_ERR_PARSE);
        assert_eq!(fs_diagram_validate(ptr::null()), FS_ERR_NULL);
        fs_string_free(ptr::null_mut());
        fs_diagram_free(ptr::null_mut());
    }
}

#[test]
fn presentation_text() {
    unsafe {
        let fam = CString::new("J").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(fs_presentation_text(fam.as_ptr(), -1, -1, &mut s), FS_OK);
        let s = take(s);
        assert_eq!(s.lines().filter(|l| l.starts_with("rel:")).count(), 3);
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("OUT_DIR"), "/fillscope.h")).unwrap();
    for name in ["fs_construct", "fs_diagram_free", "fs_string_free", "FS_ERR_BUDGET", "FsDiagram"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
