/// Plain-loop versions of the seven metrics.
pub fn oracle(t: &[f64], e: &[f64]) -> [f64; 7] {
    let n = t.len() as f64;
    let mut mse = 0.0;
    let mut mae = 0.0;
    let mut msle = 0.0;
    let mut smape = 0.0;
    for i in 0..t.len() {
        let r = t[i] - e[i];
        mse += r * r / n;
        mae += r.abs() / n;
        let lt = (1.0 + if t[i] > 0.0 { t[i] } else { 0.0 }).ln();
        let le = (1.0 + if e[i] > 0.0 { e[i] } else { 0.0 }).ln();
        msle += (lt - le) * (lt - le) / n;
        let d = (t[i].abs() + e[i].abs()) / 2.0;
        if d != 0.0 {
            smape += 100.0 * r.abs() / d / n;
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let res: Vec<f64> = t.iter().zip(e).map(|(a, b)| a - b).collect();
    let (mt, mr, me) = (mean(t), mean(&res), mean(e));
    let mut vt = 0.0;
    let mut vr = 0.0;
    let mut cov = 0.0;
    let mut ve = 0.0;
    for i in 0..t.len() {
        vt += (t[i] - mt).powi(2);
        vr += (res[i] - mr).powi(2);
        ve += (e[i] - me).powi(2);
        cov += (t[i] - mt) * (e[i] - me);
    }
    let evs = 1.0 - vr / vt;
    let r = cov / (vt.sqrt() * ve.sqrt());
    [mse, mse.sqrt(), mae, msle, smape, evs, r]
}
