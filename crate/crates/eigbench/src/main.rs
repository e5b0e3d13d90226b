use std::os::raw::c_char;
use std::time::Instant;

extern "C" {
    fn dsyevd_2stage_(
        jobz: *const c_char, uplo: *const c_char, n: *const i32,
        a: *mut f64, lda: *const i32, w: *mut f64,
        work: *mut f64, lwork: *const i32,
        iwork: *mut i32, liwork: *const i32, info: *mut i32,
    );
    fn dgemm_(ta: *const c_char, tb: *const c_char, m: *const i32, n: *const i32, k: *const i32,
              alpha: *const f64, a: *const f64, lda: *const i32, b: *const f64, ldb: *const i32,
              beta: *const f64, c: *mut f64, ldc: *const i32);
}

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3000);
    let mode = std::env::args().nth(2).unwrap_or_else(|| "eig".into());
    let mut a = vec![0.0f64; n * n];
    let mut s: u64 = 0x9E3779B97F4A7C15;
    for j in 0..n {
        for i in 0..=j {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let v = ((s >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
    if mode == "gemm" {
        let b = a.clone();
        let mut c = vec![0.0f64; n * n];
        let (alpha, beta) = (1.0f64, 0.0f64);
        let ni = n as i32;
        let t = b'N' as c_char;
        let t0 = Instant::now();
        unsafe { dgemm_(&t, &t, &ni, &ni, &ni, &alpha, a.as_ptr(), &ni, b.as_ptr(), &ni, &beta, c.as_mut_ptr(), &ni); }
        let el = t0.elapsed().as_secs_f64();
        println!("dgemm n={}: {:.2}s = {:.1} GFLOPS", n, el, 2.0*(n as f64).powi(3)/el/1e9);
        return;
    }
    let jobz = b'N' as c_char;
    let uplo = b'L' as c_char;
    let ni = n as i32;
    let mut w = vec![0.0f64; n];
    let mut info = 0i32;
    let (mut wq, mut iq) = ([0.0f64], [0i32]);
    let m1 = -1i32;
    unsafe { dsyevd_2stage_(&jobz, &uplo, &ni, a.as_mut_ptr(), &ni, w.as_mut_ptr(), wq.as_mut_ptr(), &m1, iq.as_mut_ptr(), &m1, &mut info); }
    assert_eq!(info, 0);
    let lwork = wq[0] as i32;
    let liwork = iq[0];
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    let t0 = Instant::now();
    unsafe { dsyevd_2stage_(&jobz, &uplo, &ni, a.as_mut_ptr(), &ni, w.as_mut_ptr(), work.as_mut_ptr(), &lwork, iwork.as_mut_ptr(), &liwork, &mut info); }
    assert_eq!(info, 0);
    println!("dsyevd_2stage n={}: {:?} ev[0]={}", n, t0.elapsed(), w[0]);
}
