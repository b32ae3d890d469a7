/** Minimal deterministic SVG chart scaffolding (no DOM, no canvas). */

export interface Scale {
    (v: number): number;
    domain: [number, number];
    range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
    const [d0, d1] = domain;
    const [r0, r1] = range;
    const span = d1 - d0 === 0 ? 1 : d1 - d0;
    const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
    f.domain = domain;
    f.range = range;
    return f;
}

export function extent(values: number[]): [number, number] {
    let lo = Infinity;
    let hi = -Infinity;
    for (const v of values) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (!Number.isFinite(lo)) return [0, 1];
    if (lo === hi) return [lo - 1, hi + 1];
    return [lo, hi];
}

export function padDomain([lo, hi]: [number, number], frac = 0.05): [number, number] {
    const pad = (hi - lo) * frac;
    return [lo - pad, hi + pad];
}

const fmt = (v: number) => v.toFixed(2);

export function ticks([lo, hi]: [number, number], count = 5): number[] {
    const span = hi - lo;
    if (span <= 0) return [lo];
    const step = Math.pow(10, Math.floor(Math.log10(span / count)));
    const err = (span / count) / step;
    const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
    const s = step * mult;
    const start = Math.ceil(lo / s) * s;
    const out: number[] = [];
    for (let v = start; v <= hi + 1e-12 * Math.abs(s); v += s) {
        out.push(Math.abs(v) < 1e-12 * Math.abs(s) ? 0 : v);
    }
    return out;
}

export function tickLabel(v: number): string {
    if (v === 0) return '0';
    const a = Math.abs(v);
    if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
    return String(Number(v.toPrecision(4)));
}

export function polyline(points: Array<[number, number]>, style: string): string {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(' ');
    return `<polyline fill="none" ${style} points="${pts}"/>`;
}

export function text(x: number, y: number, content: string, style = ''): string {
    return `<text x="${fmt(x)}" y="${fmt(y)}" ${style}>${escapeXml(content)}</text>`;
}

export function escapeXml(s: string): string {
    return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

export interface Panel {
    x: number;
    y: number;
    width: number;
    height: number;
    xScale: Scale;
    yScale: Scale;
    body: string[];
}

/** Axes, tick marks and labels around a panel's plotting area. */
export function axes(p: Panel, xLabel: string, yLabel: string, title = ''): string {
    const parts: string[] = [];
    const x0 = p.x;
    const y0 = p.y + p.height;
    parts.push(`<rect x="${fmt(p.x)}" y="${fmt(p.y)}" width="${fmt(p.width)}" height="${fmt(p.height)}" fill="none" stroke="#888" stroke-width="1"/>`);
    for (const t of ticks(p.xScale.domain)) {
        const px = p.xScale(t);
        parts.push(`<line x1="${fmt(px)}" y1="${fmt(y0)}" x2="${fmt(px)}" y2="${fmt(y0 + 4)}" stroke="#444"/>`);
        parts.push(text(px, y0 + 16, tickLabel(t), 'font-size="10" text-anchor="middle" fill="#333"'));
    }
    for (const t of ticks(p.yScale.domain)) {
        const py = p.yScale(t);
        parts.push(`<line x1="${fmt(x0 - 4)}" y1="${fmt(py)}" x2="${fmt(x0)}" y2="${fmt(py)}" stroke="#444"/>`);
        parts.push(text(x0 - 6, py + 3, tickLabel(t), 'font-size="10" text-anchor="end" fill="#333"'));
        parts.push(`<line x1="${fmt(x0)}" y1="${fmt(py)}" x2="${fmt(x0 + p.width)}" y2="${fmt(py)}" stroke="#eee"/>`);
    }
    parts.push(text(p.x + p.width / 2, y0 + 30, xLabel, 'font-size="11" text-anchor="middle" fill="#000"'));
    parts.push(`<text x="${fmt(p.x - 40)}" y="${fmt(p.y + p.height / 2)}" font-size="11" text-anchor="middle" fill="#000" transform="rotate(-90 ${fmt(p.x - 40)} ${fmt(p.y + p.height / 2)})">${escapeXml(yLabel)}</text>`);
    if (title) {
        parts.push(text(p.x + p.width / 2, p.y - 6, title, 'font-size="12" text-anchor="middle" font-weight="bold" fill="#000"'));
    }
    return parts.join('\n');
}

export function document(width: number, height: number, body: string[]): string {
    return [
        `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
        `<rect width="${width}" height="${height}" fill="white"/>`,
        ...body,
        '</svg>',
        '',
    ].join('\n');
}

export const PALETTE = ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728', '#9467bd', '#8c564b'];
