// Panel layouts: reference tracks in black, full-model tracks in red,
// concurrence dashed blue, pulse time as a gray vertical rule.
import { Raster, type Color } from "./draw.js";
import { column, type Panel, type Table } from "./csv.js";

const BLACK: Color = [20, 20, 20];
const RED: Color = [205, 40, 40];
const BLUE: Color = [40, 70, 200];
const GRAY: Color = [150, 150, 150];
const AXIS: Color = [60, 60, 60];

interface Series {
    label: string;
    values: number[];
    color: Color;
    dash?: [number, number];
}

interface Box {
    x: number;
    y: number;
    w: number;
    h: number;
}

function niceTicks(lo: number, hi: number, target = 5): number[] {
    if (!(hi > lo)) hi = lo + 1;
    const span = hi - lo;
    const step0 = span / target;
    const mag = Math.pow(10, Math.floor(Math.log10(step0)));
    const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => span / s <= target) ?? mag * 10;
    const ticks: number[] = [];
    for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12; v += step) {
        ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return ticks;
}

function fmtTick(v: number): string {
    const s = Math.abs(v) >= 100 || (v !== 0 && Math.abs(v) < 0.01)
        ? v.toExponential(1)
        : Number(v.toFixed(3)).toString();
    return s;
}

function subplot(
    r: Raster, box: Box, title: string,
    t: number[], series: Series[], pulseTime: number | null,
): void {
    const margin = { left: 46, right: 10, top: 18, bottom: 26 };
    const plot: Box = {
        x: box.x + margin.left,
        y: box.y + margin.top,
        w: box.w - margin.left - margin.right,
        h: box.h - margin.top - margin.bottom,
    };
    let lo = Infinity;
    let hi = -Infinity;
    for (const s of series) {
        for (const v of s.values) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
    }
    if (!(hi > lo)) {
        hi = lo + 1;
    }
    const pad = 0.06 * (hi - lo);
    lo -= pad;
    hi += pad;
    const tLo = t[0];
    const tHi = t[t.length - 1];
    const px = (tv: number) => plot.x + ((tv - tLo) / (tHi - tLo || 1)) * plot.w;
    const py = (v: number) => plot.y + plot.h - ((v - lo) / (hi - lo)) * plot.h;

    // frame and ticks
    r.line(plot.x, plot.y, plot.x, plot.y + plot.h, AXIS);
    r.line(plot.x, plot.y + plot.h, plot.x + plot.w, plot.y + plot.h, AXIS);
    for (const tick of niceTicks(tLo, tHi, 6)) {
        const x = px(tick);
        r.line(x, plot.y + plot.h, x, plot.y + plot.h + 3, AXIS);
        const label = fmtTick(tick);
        r.text(x - r.textWidth(label) / 2, plot.y + plot.h + 6, label, AXIS);
    }
    for (const tick of niceTicks(lo, hi, 4)) {
        const y = py(tick);
        r.line(plot.x - 3, y, plot.x, y, AXIS);
        const label = fmtTick(tick);
        r.text(plot.x - 5 - r.textWidth(label), y - 3, label, AXIS);
    }
    r.text(plot.x + plot.w / 2 - r.textWidth(title) / 2, box.y + 4, title, BLACK);
    r.text(plot.x + plot.w - r.textWidth("t"), plot.y + plot.h + 16, "t", AXIS);

    if (pulseTime !== null && pulseTime > tLo && pulseTime < tHi) {
        r.line(px(pulseTime), plot.y, px(pulseTime), plot.y + plot.h, GRAY, 1, [3, 3]);
    }

    for (const s of series) {
        const xs = t.map(px);
        const ys = s.values.map((v) => py(Math.min(Math.max(v, lo), hi)));
        r.polyline(xs, ys, s.color, 2, s.dash);
    }
    // legend, top-right corner of the plot area
    let ly = plot.y + 4;
    for (const s of series) {
        const lx = plot.x + plot.w - 12 - r.textWidth(s.label);
        r.line(lx - 14, ly + 3, lx - 4, ly + 3, s.color, 2, s.dash);
        r.text(lx, ly, s.label, s.color);
        ly += 11;
    }
}

export function renderPanel(table: Table, panel: Panel, pulseTime: number | null): Raster {
    const t = column(table, "t");
    if (panel === "fig3") {
        const r = new Raster(760, 640);
        const names: Array<[string, string, string]> = [
            ["sx_markov", "sx_full", "sx"],
            ["sy_markov", "sy_full", "sy"],
            ["sz_markov", "sz_full", "sz"],
        ];
        names.forEach(([markov, full, title], i) => {
            subplot(r, { x: 0, y: i * 210 + 5, w: 760, h: 205 }, title, t, [
                { label: markov, values: column(table, markov), color: BLACK },
                { label: full, values: column(table, full), color: RED },
            ], pulseTime);
        });
        return r;
    }
    if (panel === "fig4") {
        const r = new Raster(900, 360);
        subplot(r, { x: 0, y: 10, w: 450, h: 340 }, "trace distance", t, [
            { label: "D_markov", values: column(table, "D_markov"), color: BLACK },
            { label: "D_full", values: column(table, "D_full"), color: RED },
        ], pulseTime);
        subplot(r, { x: 450, y: 10, w: 450, h: 340 }, "concurrence", t, [
            { label: "C_markov", values: column(table, "C_markov"), color: BLACK },
            { label: "C_full", values: column(table, "C_full"), color: RED },
        ], pulseTime);
        return r;
    }
    // fig5: decoupling comparison
    const r = new Raster(900, 360);
    subplot(r, { x: 0, y: 10, w: 450, h: 340 }, "decoupling", t, [
        { label: "D_direct", values: column(table, "D_direct"), color: BLACK },
        { label: "D_delayed", values: column(table, "D_delayed"), color: RED },
    ], pulseTime);
    subplot(r, { x: 450, y: 10, w: 450, h: 340 }, "recovery vs entanglement", t, [
        { label: "D_delayed", values: column(table, "D_delayed"), color: RED },
        {
            label: "C_atom_cavity_delayed",
            values: column(table, "C_atom_cavity_delayed"),
            color: BLUE,
            dash: [5, 4],
        },
    ], pulseTime);
    return r;
}
