use std::ffi::{c_char, CStr, CString};
use std::ptr;

use dessin_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let owned = CStr::from_ptr(s).to_str().unwrap().to_owned();
    dessin_string_free(s);
    owned
}

struct Engine(*mut DessinEngine);

impl Engine {
    fn new(dmax: u32) -> Self {
        let mut raw = ptr::null_mut();
        assert_eq!(
            unsafe { dessin_engine_new(dmax, &mut raw) },
            DessinStatus::Ok
        );
        assert!(!raw.is_null());
        Engine(raw)
    }

    fn marked(&self, d: u32, g: u32) -> Result<String, DessinStatus> {
        let mut s = ptr::null_mut();
        match unsafe { dessin_engine_marked(self.0, d, g, &mut s) } {
            DessinStatus::Ok => Ok(unsafe { take(s) }),
            status => Err(status),
        }
    }

    fn coefficient(&self, k: u32, l: u32, profile: &str) -> Result<String, DessinStatus> {
        let profile = CString::new(profile).unwrap();
        let mut s = ptr::null_mut();
        match unsafe { dessin_engine_coefficient(self.0, k, l, profile.as_ptr(), &mut s) } {
            DessinStatus::Ok => Ok(unsafe { take(s) }),
            status => Err(status),
        }
    }
}

impl Drop for Engine {
    fn drop(&mut self) {
        unsafe { dessin_engine_free(self.0) }
    }
}

#[test]
fn counts_through_the_c_interface() {
    let engine = Engine::new(14);
    let mut dmax = 0;
    assert_eq!(
        unsafe { dessin_engine_dmax(engine.0, &mut dmax) },
        DessinStatus::Ok
    );
    assert_eq!(dmax, 14);
    assert_eq!(engine.marked(5, 2).unwrap(), "8");
    assert_eq!(engine.marked(9, 4).unwrap(), "8064");
    assert_eq!(engine.marked(12, 2).unwrap(), "1805010948");
    assert_eq!(engine.marked(14, 4).unwrap(), "344901105444");
    assert_eq!(engine.marked(3, 7).unwrap(), "0");
    assert_eq!(engine.marked(15, 0), Err(DessinStatus::OutOfRange));
    assert_eq!(engine.marked(0, 0), Err(DessinStatus::InvalidArgument));

    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { dessin_engine_weighted(engine.0, 2, 0, &mut s) },
        DessinStatus::Ok
    );
    assert_eq!(unsafe { take(s) }, "3/2");
}

#[test]
fn coefficients() {
    let engine = Engine::new(4);
    assert_eq!(engine.coefficient(1, 1, "1^1").unwrap(), "1");
    assert_eq!(engine.coefficient(2, 1, "2^1").unwrap(), "1/2");
    assert_eq!(engine.coefficient(1, 1, "1^2").unwrap(), "1/2");
    assert_eq!(
        engine.coefficient(1, 1, "5^1"),
        Err(DessinStatus::OutOfRange)
    );
    assert_eq!(
        engine.coefficient(1, 1, "2^"),
        Err(DessinStatus::InvalidArgument)
    );
    let mut s = ptr::null_mut();
    let status = unsafe { dessin_engine_coefficient(engine.0, 1, 1, ptr::null(), &mut s) };
    assert_eq!(status, DessinStatus::NullPointer);
}

#[test]
fn checks_and_table() {
    let engine = Engine::new(8);
    let mut passed = false;
    assert_eq!(
        unsafe { dessin_engine_kp_check(engine.0, 8, &mut passed) },
        DessinStatus::Ok
    );
    assert!(passed);
    assert_eq!(
        unsafe { dessin_engine_kp_check(engine.0, 9, &mut passed) },
        DessinStatus::OutOfRange
    );

    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { dessin_engine_table_csv(engine.0, 1, true, &mut s) },
        DessinStatus::Ok
    );
    let csv = unsafe { take(s) };
    assert!(csv.starts_with("d,g,G_marked\n1,0,1\n1,1,0\n2,0,3\n"));
    assert_eq!(csv.lines().count(), 17);

    assert_eq!(unsafe { dessin_closed_genus0(8, &mut s) }, DessinStatus::Ok);
    let closed = unsafe { take(s) };
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { dessin_engine_marked(engine.0, 8, 0, &mut t) },
        DessinStatus::Ok
    );
    assert_eq!(unsafe { take(t) }, closed);
}

#[test]
fn invalid_arguments() {
    let mut raw = ptr::null_mut();
    assert_eq!(
        unsafe { dessin_engine_new(0, &mut raw) },
        DessinStatus::InvalidArgument
    );
    assert!(raw.is_null());
    let mut dmax = 0;
    assert_eq!(
        unsafe { dessin_engine_dmax(ptr::null(), &mut dmax) },
        DessinStatus::NullPointer
    );
    let msg = unsafe { CStr::from_ptr(dessin_status_message(DessinStatus::OutOfRange)) };
    assert_eq!(msg.to_str().unwrap(), "degree beyond the engine's range");
}
