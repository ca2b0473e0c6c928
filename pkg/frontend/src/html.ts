/** Tiny formatting helpers shared by the render modules. */

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Compact fixed-precision number for cards and tables. */
export function fmt(x: number): string {
  if (!Number.isFinite(x)) return String(x);
  if (x !== 0 && (Math.abs(x) >= 1e5 || Math.abs(x) < 1e-3)) {
    return x.toExponential(3);
  }
  const s = x.toPrecision(5);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}
