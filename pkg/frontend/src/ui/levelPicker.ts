/**
 * Level picker: six sample cards (A1-C2) of the same scene. Picking posts
 * the level; re-picking is allowed until the story starts. A progress line
 * shows while the outline is still generating so the screen never freezes.
 */

import { Sample } from '../api.js';
import { clear, el } from './dom.js';

export class LevelPicker {
  private readonly progress: HTMLElement;
  private picked: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly samples: Sample[],
    private readonly onPick: (level: string) => Promise<void>,
  ) {
    this.progress = el('p', { class: 'progress hidden' }, 'Preparing your story plan...');
  }

  render(): void {
    clear(this.root);
    const grid = el('div', { class: 'sample-grid' });
    for (const sample of this.samples) {
      const card = el(
        'button',
        { class: 'sample-card', 'data-level': sample.level },
        el('span', { class: 'sample-level' }, sample.level),
        el('span', { class: 'sample-text' }, sample.text),
      );
      card.addEventListener('click', () => void this.pick(sample.level, grid));
      grid.append(card);
    }
    this.root.append(
      el('h1', {}, 'Pick the version that reads best'),
      el('p', { class: 'hint' }, 'Same scene, six difficulty levels. You can change your mind until the story starts.'),
      grid,
      this.progress,
    );
  }

  showProgress(show: boolean): void {
    this.progress.classList.toggle('hidden', !show);
  }

  private async pick(level: string, grid: HTMLElement): Promise<void> {
    this.picked = level;
    grid.querySelectorAll('.sample-card').forEach((c) => {
      c.classList.toggle('picked', c.getAttribute('data-level') === level);
    });
    await this.onPick(level);
  }
}
