/**
 * Story reader: renders the current segment's text and its action buttons,
 * or the finish screen once the story has ended. The text container's
 * textContent is exactly the server's segment text, which is what the
 * selection-to-offsets mapping depends on.
 */

import { Segment } from '../api.js';
import { clear, el } from './dom.js';

export class Reader {
  readonly textContainer: HTMLElement;
  private readonly optionsBox: HTMLElement;
  private busy = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly onChoose: (index: number) => Promise<void>,
  ) {
    this.textContainer = el('div', { class: 'segment-text' });
    this.optionsBox = el('div', { class: 'options' });
  }

  mount(): void {
    clear(this.root);
    this.root.append(this.textContainer, this.optionsBox);
  }

  showSegment(segment: Segment): void {
    this.textContainer.textContent = segment.text;
    this.textContainer.setAttribute('data-segment-id', segment.segment_id);
    clear(this.optionsBox);
    if (segment.options.length === 0) {
      this.optionsBox.append(
        el('div', { class: 'finish' },
          el('h2', {}, 'The End'),
          el('p', {}, 'Thanks for playing. Your looked-up words are in the review list.')),
      );
      return;
    }
    segment.options.forEach((option, index) => {
      const button = el('button', { class: 'option' }, option);
      button.addEventListener('click', () => void this.choose(index));
      this.optionsBox.append(button);
    });
  }

  showWaiting(message: string): void {
    clear(this.optionsBox);
    this.optionsBox.append(el('p', { class: 'progress' }, message));
  }

  private async choose(index: number): Promise<void> {
    if (this.busy) {
      return; // double-clicks also collapse in GameClient; this skips the repaint
    }
    this.busy = true;
    this.optionsBox.querySelectorAll('button').forEach((b) => ((b as HTMLButtonElement).disabled = true));
    try {
      await this.onChoose(index);
    } finally {
      this.busy = false;
    }
  }
}
