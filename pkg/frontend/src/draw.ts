// Software raster: white RGBA canvas with lines, dashes and bitmap text.
import { GLYPHS, GLYPH_H, GLYPH_W } from "./font.js";

export type Color = [number, number, number];

export class Raster {
    readonly width: number;
    readonly height: number;
    readonly data: Uint8Array;

    constructor(width: number, height: number) {
        this.width = width;
        this.height = height;
        this.data = new Uint8Array(width * height * 4).fill(255);
    }

    set(x: number, y: number, color: Color): void {
        const xi = Math.round(x);
        const yi = Math.round(y);
        if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
        const o = (yi * this.width + xi) * 4;
        this.data[o] = color[0];
        this.data[o + 1] = color[1];
        this.data[o + 2] = color[2];
        this.data[o + 3] = 255;
    }

    fillRect(x: number, y: number, w: number, h: number, color: Color): void {
        for (let j = 0; j < h; j++) {
            for (let i = 0; i < w; i++) {
                this.set(x + i, y + j, color);
            }
        }
    }

    private dot(x: number, y: number, color: Color, width: number): void {
        const r = Math.floor(width / 2);
        for (let j = -r; j <= width - 1 - r; j++) {
            for (let i = -r; i <= width - 1 - r; i++) {
                this.set(x + i, y + j, color);
            }
        }
    }

    line(
        x0: number, y0: number, x1: number, y1: number,
        color: Color, width = 1, dash?: [number, number],
        dashPhase = 0,
    ): number {
        const len = Math.hypot(x1 - x0, y1 - y0);
        const steps = Math.max(1, Math.ceil(len * 2));
        let phase = dashPhase;
        for (let s = 0; s <= steps; s++) {
            const t = s / steps;
            if (dash) {
                const cycle = dash[0] + dash[1];
                if (((phase + t * len) % cycle) >= dash[0]) continue;
            }
            this.dot(x0 + t * (x1 - x0), y0 + t * (y1 - y0), color, width);
        }
        return phase + len;
    }

    polyline(
        xs: ArrayLike<number>, ys: ArrayLike<number>,
        color: Color, width = 1, dash?: [number, number],
    ): void {
        let phase = 0;
        for (let i = 1; i < xs.length; i++) {
            phase = this.line(xs[i - 1], ys[i - 1], xs[i], ys[i], color, width, dash, phase);
        }
    }

    text(x: number, y: number, s: string, color: Color, scale = 1): void {
        let cx = Math.round(x);
        for (const ch of s) {
            const glyph = GLYPHS[ch] ?? GLYPHS[" "];
            for (let row = 0; row < GLYPH_H; row++) {
                for (let col = 0; col < GLYPH_W; col++) {
                    if (glyph[row] & (1 << (GLYPH_W - 1 - col))) {
                        this.fillRect(cx + col * scale, y + row * scale, scale, scale, color);
                    }
                }
            }
            cx += (GLYPH_W + 1) * scale;
        }
    }

    textWidth(s: string, scale = 1): number {
        return s.length * (GLYPH_W + 1) * scale;
    }
}
