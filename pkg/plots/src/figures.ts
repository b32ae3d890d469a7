import fs from 'node:fs';
import path from 'node:path';
import { num, readTable, Row, Table } from './csv.js';
import { SchemaMismatch } from './errors.js';
import {
    axes,
    document,
    extent,
    linearScale,
    padDomain,
    Panel,
    PALETTE,
    polyline,
    text,
} from './svg.js';

export type FigureKind = 'trace_overlay' | 'deviation_fan' | 'cost_vs_rho' | 'nominal_traj';

export interface FigureJob {
    inputCsv: string;
    kind: FigureKind;
    outputImage: string;
}

const REQUIRED: Record<FigureKind, string[]> = {
    trace_overlay: ['k', 'analytic_trace', 'mc_trace', 'M', 'base_seed'],
    deviation_fan: ['trial', 'k', 'component', 'value', 'M', 'base_seed'],
    cost_vs_rho: ['rho', 'sigma0', 'mean_J1_uncomp', 'mean_J1_comp', 'M', 'base_seed'],
    nominal_traj: ['stage', 'series', 'value'],
};

const WIDTH = 720;

function makePanel(
    x: number, y: number, width: number, height: number,
    xDomain: [number, number], yDomain: [number, number],
): Panel {
    return {
        x, y, width, height,
        xScale: linearScale(xDomain, [x, x + width]),
        yScale: linearScale(yDomain, [y + height, y]),
        body: [],
    };
}

/** Run metadata for the caption, taken from the CSV metadata columns. */
function captionMeta(table: Table): string {
    const row = table.rows[0];
    const parts: string[] = [];
    if (table.columns.includes('M')) parts.push(`M=${row['M']}`);
    if (table.columns.includes('base_seed')) parts.push(`base_seed=${row['base_seed']}`);
    return parts.join(', ');
}

function caption(label: string, meta: string, y: number): string {
    const full = meta ? `${label} (${meta})` : label;
    return text(WIDTH / 2, y, full, 'font-size="11" text-anchor="middle" fill="#222"');
}

function legendEntry(x: number, y: number, style: string, label: string): string {
    return [
        `<line x1="${x}" y1="${y - 4}" x2="${x + 26}" y2="${y - 4}" ${style}/>`,
        text(x + 32, y, label, 'font-size="10" fill="#000"'),
    ].join('\n');
}

function renderTraceOverlay(table: Table): string {
    const ks = table.rows.map((r) => num(r, 'k', table.path));
    const analytic = table.rows.map((r) => num(r, 'analytic_trace', table.path));
    const mc = table.rows.map((r) => num(r, 'mc_trace', table.path));
    const panel = makePanel(70, 40, WIDTH - 100, 330,
        extent(ks), padDomain(extent([...analytic, ...mc, 0])));
    const toPoints = (ys: number[]): Array<[number, number]> =>
        ks.map((k, i) => [panel.xScale(k), panel.yScale(ys[i])]);
    const body = [
        axes(panel, 'stage k', 'tr(Sigma_k)', 'State-covariance trace: recursion vs Monte Carlo'),
        polyline(toPoints(analytic), `stroke="${PALETTE[0]}" stroke-width="2"`),
        polyline(toPoints(mc), `stroke="${PALETTE[1]}" stroke-width="2" stroke-dasharray="6 3"`),
        legendEntry(panel.x + 10, panel.y + 16, `stroke="${PALETTE[0]}" stroke-width="2"`, 'analytic recursion'),
        legendEntry(panel.x + 10, panel.y + 30, `stroke="${PALETTE[1]}" stroke-width="2" stroke-dasharray="6 3"`, 'Monte Carlo estimate'),
        caption('Analytic vs empirical covariance trace over the horizon', captionMeta(table), 420),
    ];
    return document(WIDTH, 440, body);
}

function renderDeviationFan(table: Table): string {
    interface Series { [trial: number]: Array<[number, number]> }
    const components = new Map<number, Series>();
    for (const r of table.rows) {
        const c = num(r, 'component', table.path);
        const t = num(r, 'trial', table.path);
        const k = num(r, 'k', table.path);
        const v = num(r, 'value', table.path);
        if (!components.has(c)) components.set(c, {});
        const series = components.get(c)!;
        (series[t] ??= []).push([k, v]);
    }
    const compIds = [...components.keys()].sort((a, b) => a - b);
    const panelH = 150;
    const height = 40 + compIds.length * (panelH + 45) + 30;
    const body: string[] = [];
    const allValues = table.rows.map((r) => num(r, 'value', table.path));
    const allK = table.rows.map((r) => num(r, 'k', table.path));
    let y = 40;
    for (const c of compIds) {
        const series = components.get(c)!;
        const panel = makePanel(70, y, WIDTH - 100, panelH,
            extent(allK), padDomain(extent([...allValues, 0])));
        body.push(axes(panel, 'stage k', `dx[${c}]`, `deviation-state component ${c}`));
        const trials = Object.keys(series).map(Number).sort((a, b) => a - b);
        const sums = new Map<number, { total: number; count: number }>();
        for (const t of trials) {
            const pts = series[t]
                .sort((a, b) => a[0] - b[0])
                .map(([k, v]): [number, number] => {
                    const acc = sums.get(k) ?? { total: 0, count: 0 };
                    acc.total += v;
                    acc.count += 1;
                    sums.set(k, acc);
                    return [panel.xScale(k), panel.yScale(v)];
                });
            body.push(polyline(pts, 'stroke="#bbb" stroke-width="0.8" opacity="0.6"'));
        }
        const mean = [...sums.entries()]
            .sort((a, b) => a[0] - b[0])
            .map(([k, acc]): [number, number] =>
                [panel.xScale(k), panel.yScale(acc.total / acc.count)]);
        body.push(polyline(mean, `stroke="${PALETTE[3]}" stroke-width="2.5"`));
        y += panelH + 45;
    }
    body.push(caption(
        `Sampled deviation-state paths (grey) with componentwise means (bold), ${compIds.length} components`,
        captionMeta(table), height - 12));
    return document(WIDTH, height, body);
}

function renderCostVsRho(table: Table): string {
    const bySigma = new Map<number, Row[]>();
    for (const r of table.rows) {
        const s = num(r, 'sigma0', table.path);
        if (!bySigma.has(s)) bySigma.set(s, []);
        bySigma.get(s)!.push(r);
    }
    const sigmas = [...bySigma.keys()].sort((a, b) => a - b);
    const rhos = table.rows.map((r) => num(r, 'rho', table.path));
    const costs = table.rows.flatMap((r) => [
        num(r, 'mean_J1_uncomp', table.path), num(r, 'mean_J1_comp', table.path)]);
    const panel = makePanel(70, 40, WIDTH - 110, 340, extent(rhos), padDomain(extent(costs)));
    const body = [axes(panel, 'persistence rho', 'expected cost',
        'Expected first-player cost vs persistence')];
    sigmas.forEach((s, i) => {
        const color = PALETTE[i % PALETTE.length];
        const rows = bySigma.get(s)!
            .slice()
            .sort((a, b) => num(a, 'rho', table.path) - num(b, 'rho', table.path));
        const uncomp = rows.map((r): [number, number] =>
            [panel.xScale(num(r, 'rho', table.path)), panel.yScale(num(r, 'mean_J1_uncomp', table.path))]);
        const comp = rows.map((r): [number, number] =>
            [panel.xScale(num(r, 'rho', table.path)), panel.yScale(num(r, 'mean_J1_comp', table.path))]);
        body.push(polyline(uncomp, `stroke="${color}" stroke-width="2"`));
        body.push(polyline(comp, `stroke="${color}" stroke-width="2" stroke-dasharray="6 3"`));
        body.push(legendEntry(panel.x + 10, panel.y + 16 + i * 14,
            `stroke="${color}" stroke-width="2"`, `sigma0=${s} (solid: no compensation, dashed: predictive)`));
    });
    body.push(caption('Paired sweep: solid = uncompensated, dashed = compensated',
        captionMeta(table), 430));
    return document(WIDTH, 450, body);
}

function renderNominalTraj(table: Table): string {
    const bySeries = new Map<string, Array<[number, number]>>();
    for (const r of table.rows) {
        const name = r['series'];
        if (!bySeries.has(name)) bySeries.set(name, []);
        bySeries.get(name)!.push([num(r, 'stage', table.path), num(r, 'value', table.path)]);
    }
    const names = [...bySeries.keys()];
    const stateNames = names.filter((n) => n.startsWith('x')).sort();
    const controlNames = names.filter((n) => n.startsWith('u')).sort();
    if (stateNames.length === 0) {
        throw new SchemaMismatch(table.path, "no state series (expected names like 'x1')");
    }
    const groups: Array<[string, string[]]> = [['states', stateNames]];
    if (controlNames.length > 0) groups.push(['controls', controlNames]);
    const panelH = 180;
    const height = 40 + groups.length * (panelH + 50) + 30;
    const body: string[] = [];
    let y = 40;
    for (const [label, group] of groups) {
        const pts = group.flatMap((n) => bySeries.get(n)!);
        const panel = makePanel(70, y, WIDTH - 110, panelH,
            extent(pts.map((p) => p[0])), padDomain(extent([...pts.map((p) => p[1]), 0])));
        body.push(axes(panel, 'stage', label, `nominal ${label}`));
        group.forEach((n, i) => {
            const color = PALETTE[i % PALETTE.length];
            const line = bySeries.get(n)!
                .slice()
                .sort((a, b) => a[0] - b[0])
                .map(([k, v]): [number, number] => [panel.xScale(k), panel.yScale(v)]);
            body.push(polyline(line, `stroke="${color}" stroke-width="2"`));
            body.push(legendEntry(panel.x + 10, panel.y + 16 + i * 13,
                `stroke="${color}" stroke-width="2"`, n));
        });
        y += panelH + 50;
    }
    body.push(caption('Closed-loop equilibrium trajectories from the configured initial state',
        captionMeta(table), height - 12));
    return document(WIDTH, height, body);
}

/** Render one figure job to an SVG file; never mutates its input. */
export function render(job: FigureJob): void {
    const table = readTable(job.inputCsv, REQUIRED[job.kind]);
    let svg: string;
    switch (job.kind) {
        case 'trace_overlay':
            svg = renderTraceOverlay(table);
            break;
        case 'deviation_fan':
            svg = renderDeviationFan(table);
            break;
        case 'cost_vs_rho':
            svg = renderCostVsRho(table);
            break;
        case 'nominal_traj':
            svg = renderNominalTraj(table);
            break;
    }
    fs.mkdirSync(path.dirname(path.resolve(job.outputImage)), { recursive: true });
    fs.writeFileSync(job.outputImage, svg);
}
