/**
 * Game initiation: pick a genre card (with example works as a caption),
 * optionally type a premise, start the game.
 */

import { ApiError, Genre } from '../api.js';
import { clear, el } from './dom.js';

export class InitiationScreen {
  private selected: string | null = null;
  private readonly startButton: HTMLButtonElement;
  private readonly errorBox: HTMLElement;
  private readonly premiseInput: HTMLTextAreaElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly genres: Genre[],
    private readonly onStart: (genre: string, premise: string) => Promise<void>,
  ) {
    this.startButton = el('button', { class: 'primary', disabled: '' }, 'Start the story');
    this.errorBox = el('div', { class: 'error-box hidden' });
    this.premiseInput = el('textarea', {
      class: 'premise',
      placeholder: 'Optional: add characters, a setting, anything you like - or leave it all to the story.',
    });
  }

  render(): void {
    clear(this.root);
    const cards = el('div', { class: 'genre-grid' });
    if (this.genres.length === 0) {
      this.root.append(
        el('p', { class: 'notice' }, 'No genres are configured. Ask the operator to add some.'),
      );
    }
    for (const genre of this.genres) {
      const card = el(
        'button',
        { class: 'genre-card', 'data-genre': genre.genre_id },
        el('span', { class: 'genre-name' }, genre.display_name),
        el('span', { class: 'genre-works' }, `e.g. ${genre.example_works}`),
      );
      card.addEventListener('click', () => {
        this.selected = genre.genre_id;
        cards.querySelectorAll('.genre-card').forEach((c) => c.classList.remove('picked'));
        card.classList.add('picked');
        this.startButton.disabled = false;
      });
      cards.append(card);
    }

    this.startButton.addEventListener('click', () => void this.submit());
    this.root.append(
      el('h1', {}, 'Choose your adventure'),
      cards,
      this.premiseInput,
      this.startButton,
      this.errorBox,
    );
  }

  private async submit(): Promise<void> {
    if (!this.selected) {
      return;
    }
    this.startButton.disabled = true;
    this.errorBox.classList.add('hidden');
    try {
      await this.onStart(this.selected, this.premiseInput.value.trim());
    } catch (error) {
      this.showError(error);
      this.startButton.disabled = false;
    }
  }

  private showError(error: unknown): void {
    const retriable = error instanceof ApiError && error.retriable;
    this.errorBox.textContent =
      error instanceof ApiError
        ? `${error.message}${retriable ? ' - please try again.' : ''}`
        : 'Something went wrong.';
    this.errorBox.classList.remove('hidden');
  }
}
