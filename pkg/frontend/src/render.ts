/**
 * DOM-free rasterization of wire frames into RGBA pixel buffers. The
 * browser layer blits the buffer to a canvas; tests assert on pixels
 * directly.
 */

import type { RGB, WireFrame } from "./protocol.js";

export class FrameSizeMismatch extends Error {}

export class PixelBuffer {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8ClampedArray<ArrayBuffer>; // RGBA, row-major

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.data = new Uint8ClampedArray(width * height * 4);
  }

  set(x: number, y: number, rgb: RGB): void {
    const i = (y * this.width + x) * 4;
    this.data[i] = rgb[0];
    this.data[i + 1] = rgb[1];
    this.data[i + 2] = rgb[2];
    this.data[i + 3] = 255;
  }

  at(x: number, y: number): RGB {
    const i = (y * this.width + x) * 4;
    return [this.data[i], this.data[i + 1], this.data[i + 2]];
  }
}

/**
 * Paint one frame at a given cell size. Cells fill their square; agents
 * draw on top in wire order, either filling their cell or as a centred
 * disc whose diameter is `size` x the cell side.
 */
export function renderFrame(
  frame: WireFrame,
  gridWidth: number,
  gridHeight: number,
  cellSize: number,
): PixelBuffer {
  if (frame.cells.length !== gridWidth * gridHeight * 3) {
    throw new FrameSizeMismatch(
      `expected ${gridWidth * gridHeight * 3} color components, ` +
        `got ${frame.cells.length}`,
    );
  }
  const buf = new PixelBuffer(gridWidth * cellSize, gridHeight * cellSize);
  for (let r = 0; r < gridHeight; r++) {
    for (let c = 0; c < gridWidth; c++) {
      const base = (r * gridWidth + c) * 3;
      const rgb: RGB = [
        frame.cells[base],
        frame.cells[base + 1],
        frame.cells[base + 2],
      ];
      fillCell(buf, r, c, cellSize, rgb);
    }
  }
  for (const agent of frame.agents) {
    const rgb: RGB = [agent.color[0], agent.color[1], agent.color[2]];
    if (agent.shape === "cell-fill") {
      fillCell(buf, agent.row, agent.col, cellSize, rgb);
    } else {
      fillDisc(buf, agent.row, agent.col, cellSize, agent.size, rgb);
    }
  }
  return buf;
}

function fillCell(
  buf: PixelBuffer,
  row: number,
  col: number,
  cellSize: number,
  rgb: RGB,
): void {
  for (let y = row * cellSize; y < (row + 1) * cellSize; y++) {
    for (let x = col * cellSize; x < (col + 1) * cellSize; x++) {
      buf.set(x, y, rgb);
    }
  }
}

function fillDisc(
  buf: PixelBuffer,
  row: number,
  col: number,
  cellSize: number,
  size: number,
  rgb: RGB,
): void {
  const cx = (col + 0.5) * cellSize;
  const cy = (row + 0.5) * cellSize;
  const radius = (size * cellSize) / 2;
  const x0 = Math.max(0, Math.floor(cx - radius));
  const x1 = Math.min(buf.width - 1, Math.ceil(cx + radius));
  const y0 = Math.max(0, Math.floor(cy - radius));
  const y1 = Math.min(buf.height - 1, Math.ceil(cy + radius));
  for (let y = y0; y <= y1; y++) {
    for (let x = x0; x <= x1; x++) {
      const dx = x + 0.5 - cx;
      const dy = y + 0.5 - cy;
      if (dx * dx + dy * dy <= radius * radius) {
        buf.set(x, y, rgb);
      }
    }
  }
}

/** Map a pixel coordinate back to the (row, col) of the cell under it. */
export function cellAtPixel(
  x: number,
  y: number,
  cellSize: number,
): { row: number; col: number } {
  return { row: Math.floor(y / cellSize), col: Math.floor(x / cellSize) };
}
